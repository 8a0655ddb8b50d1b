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

#ifndef QEMICS_DENSITY_H
#define QEMICS_DENSITY_H

#include <optional>
#include <utility>
#include <vector>

#include "qemics/circuit.h"
#include "qemics/noise.h"

namespace qem {

inline constexpr size_t kMaxDensityQubits = 12;

/// Density matrix of n <= 12 qubits. Basis index bit q is the state of qubit q.
class DensityState {
   public:
    /// |0...0><0...0|.
    explicit DensityState(size_t num_qubits);
    static DensityState from_matrix(MatX rho);
    /// I / 2^n.
    static DensityState maximally_mixed(size_t num_qubits);

    size_t num_qubits() const { return n_; }
    size_t dim() const { return size_t{1} << n_; }
    const MatX &matrix() const { return rho_; }

    /// Applies a 4x4 (one qubit) or 16x16 (two qubits, basis |b_q0 + 2 b_q1>) superoperator
    /// acting on row-major vec of the local block.
    void apply_superop(const MatX &superop, uint32_t q0, uint32_t q1 = 0);
    void apply_channel(const Channel &c, uint32_t q0, uint32_t q1 = 0);
    void apply_unitary(const Mat2 &u, uint32_t q);
    /// rho -> (1 - t) rho + t Tr(rho) I / 2^n.
    void depolarise(double t);

    double trace() const { return rho_.trace().real(); }

   private:
    DensityState() = default;
    size_t n_ = 0;
    MatX rho_;
};

/// Noisy evolution of |0...0> through the circuit. Each gate's unitary is followed by its
/// noise channel; `correction`, when given, is a two-qubit map applied after the noise of
/// every two-qubit gate.
DensityState run(const Circuit &circuit, const NoiseModel &noise,
                 const std::optional<Channel> &correction = std::nullopt);

/// Tr(Q rho).
double expectation(const DensityState &state, const PauliString &q);
/// (Tr(Q rho^2), Tr(rho^2)).
std::pair<double, double> purity_pair(const DensityState &state, const PauliString &q);
/// Applies (1 - lambda)[I] + lambda D on the pair (q0, q1).
DensityState apply_inverse_map(DensityState state, double lambda, uint32_t q0, uint32_t q1);

/// Noiseless <Q> of any circuit by statevector simulation.
double statevector_expectation(const Circuit &circuit);

}  // namespace qem

#endif
