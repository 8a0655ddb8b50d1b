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

#ifndef QEMICS_STABILIZER_H
#define QEMICS_STABILIZER_H

#include <array>
#include <optional>
#include <vector>

#include "qemics/circuit.h"
#include "qemics/noise.h"
#include "qemics/pauli.h"

namespace qem {

/// U^dagger Q U for a Clifford circuit, by backward conjugation.
PauliString effective_observable(const Circuit &circuit);
/// <0...0| P |0...0> for a signed Pauli: 0 if any factor is X or Y, else the sign.
int expectation_on_zero_state(const PauliString &p);
/// Ideal expectation f in {-1, 0, +1}.
int ideal_expectation(const Circuit &circuit);
/// w(C): number of non-identity factors of the effective observable.
size_t circuit_weight(const Circuit &circuit);

/// Forward conjugation of `sigma` through elements [position, N). An error occurring
/// right after element i is propagated with position = i + 1.
PauliString propagate_error(const Circuit &circuit, size_t position, const PauliString &sigma);

/// A single-Pauli channel (1-p)[I] + p[sigma] inserted after element `origin`, and the
/// same error moved to the end of the circuit.
struct PropagatedChannel {
    size_t origin = 0;
    PauliString local_pauli;
    PauliString propagated;
    double probability = 0;
};

/// Product-form channels of every noisy gate of the circuit under `model`, propagated to
/// the end. Throws std::invalid_argument for models without a product form.
std::vector<PropagatedChannel> propagate_channels(const Circuit &circuit, const NoiseModel &model);

/// f * prod_k (1 - 2 p_k)^{t_k}, t_k = 1 when the propagated error anticommutes with Q.
double pauli_noise_expectation(const Circuit &circuit, const std::vector<PropagatedChannel> &channels);

/// Exact noisy expectation of a Clifford circuit under a Pauli noise model, computed in
/// one backward pass from the Pauli eigenvalues of each gate's channel. `correction`, if
/// given, is a two-qubit Pauli map applied after every two-qubit gate's noise (it may be
/// non-CP, e.g. the PEC inverse map). Throws std::invalid_argument for non-Pauli models.
double pauli_noise_expectation(const Circuit &circuit, const NoiseModel &model,
                               const std::optional<Channel> &correction = std::nullopt);

/// Inserts inserted[0] (x) inserted[1] on the qubits of every two-qubit gate and returns,
/// for each gate in order, the factor of the propagated error on `qubit`.
std::vector<Pauli> propagated_factors_on_qubit(const Circuit &circuit, const std::array<Pauli, 2> &inserted,
                                               uint32_t qubit);

}  // namespace qem

#endif
