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

#ifndef QEMICS_TESTS_HELPERS_H
#define QEMICS_TESTS_HELPERS_H

#include <memory>
#include <string>
#include <vector>

#include "qemics/circuit.h"
#include "qemics/rng.h"

namespace qem::testing {

// First layer of slots, then each gate followed by slots on both of its qubits.
inline std::shared_ptr<const CircuitFrame> make_frame(size_t n, const std::vector<CliffordGate> &gates,
                                                      const std::string &observable) {
    std::vector<FrameElement> els;
    for (uint32_t q = 0; q < n; q++) els.push_back(FrameElement::slot(q));
    for (const CliffordGate &g : gates) {
        els.push_back(FrameElement::two_qubit(g));
        els.push_back(FrameElement::slot(g.q0));
        els.push_back(FrameElement::slot(g.q1));
    }
    return std::make_shared<const CircuitFrame>(n, els, PauliString::from_str(observable));
}

// Frame with only the first slot layer.
inline std::shared_ptr<const CircuitFrame> bare_frame(const std::string &observable) {
    return make_frame(PauliString::from_str(observable).num_qubits(), {}, observable);
}

inline Circuit with_slots(const std::shared_ptr<const CircuitFrame> &frame, std::vector<int> indices) {
    indices.resize(frame->num_slots(), 0);
    return bind_cliffords(frame, indices);
}

inline Circuit random_clifford(const std::shared_ptr<const CircuitFrame> &frame, Rng &rng) {
    std::vector<int> idx(frame->num_slots());
    for (int &k : idx) k = static_cast<int>(uniform_index(rng, kC1Size));
    return bind_cliffords(frame, idx);
}

inline std::shared_ptr<const CircuitFrame> random_frame(size_t n, size_t gates, Rng &rng, bool allow_cnot = true) {
    std::vector<CliffordGate> gs;
    for (size_t i = 0; i < gates; i++) {
        uint32_t a = static_cast<uint32_t>(uniform_index(rng, n));
        uint32_t b = static_cast<uint32_t>(uniform_index(rng, n - 1));
        if (b >= a) b++;
        gs.push_back(allow_cnot && uniform_index(rng, 2) ? CliffordGate::cnot(a, b) : CliffordGate::cz(a, b));
    }
    std::string obs;
    for (size_t q = 0; q < n; q++) obs += "IZXY"[uniform_index(rng, 4)];
    if (obs.find_first_not_of('I') == std::string::npos) obs[0] = 'Z';
    return make_frame(n, gs, obs);
}

}  // namespace qem::testing

#endif
