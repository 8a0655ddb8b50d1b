// Copyright 2026 The qem-ics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QEMICS_CIRCUIT_IO_H
#define QEMICS_CIRCUIT_IO_H

#include <memory>

#include "json.hpp"
#include "qemics/circuit.h"
#include "qemics/noise.h"

namespace qem {

// Readers throw std::invalid_argument on malformed input.

nlohmann::json frame_to_json(const CircuitFrame &frame);
std::shared_ptr<const CircuitFrame> frame_from_json(const nlohmann::json &j);

/// Frame fields plus "slots": [{"c1": k} | {"u": [[re, im] x 4]}] (row-major entries).
nlohmann::json circuit_to_json(const Circuit &circuit);
Circuit circuit_from_json(const nlohmann::json &j);

nlohmann::json noise_to_json(const NoiseModel &model);
NoiseModel noise_from_json(const nlohmann::json &j);

nlohmann::json composite_to_json(const CompositeParams &p);
CompositeParams composite_from_json(const nlohmann::json &j);

GateKind gate_kind_from_string(const std::string &name);
std::string gate_kind_name(GateKind kind);

}  // namespace qem

#endif
