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

#ifndef QEMICS_CLIFFORD_H
#define QEMICS_CLIFFORD_H

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qemics/pauli.h"

namespace qem {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

/// Number of elements of the single-qubit Clifford group (modulo global phase).
inline constexpr int kC1Size = 24;

/// Signed single-qubit Pauli: the image of a Pauli under Clifford conjugation.
struct SignedPauli {
    Pauli pauli = Pauli::I;
    bool negative = false;
    bool operator==(const SignedPauli &) const = default;
};

/// One element of the single-qubit Clifford group.
///
/// Elements are enumerated by breadth-first closure of {H, S} from the identity,
/// so index 0 is the identity and the order is fixed for all runs.
struct C1Element {
    Mat2 matrix;
    /// forward[p] = R p R^dagger, indexed by Pauli encoding.
    std::array<SignedPauli, 4> forward;
    /// adjoint[p] = R^dagger p R.
    std::array<SignedPauli, 4> adjoint;
    /// Generator word that builds this element, applied left to right (e.g. "HS" = S*H).
    std::string word;
};

Mat2 pauli_matrix(Pauli p);

const std::array<C1Element, kC1Size> &c1_table();
const C1Element &c1_element(int index);

/// Index of the group element equal to `u` up to global phase, or -1 if `u` is not Clifford.
int c1_index_of(const Mat2 &u, double tol = 1e-9);

namespace c1 {
int hadamard();
int phase_s();
int pauli_x();
int pauli_y();
int pauli_z();
}  // namespace c1

/// All R in C1 with R^dagger p R = +-Z, or all 24 elements when p = I.
const std::vector<int> &cliffords_mapping_to_z(Pauli p);

enum class GateKind : uint8_t { SingleQubit, CZ, CNOT };

/// A Clifford gate: a C1 element on one qubit, or CZ/CNOT on a pair.
struct CliffordGate {
    GateKind kind = GateKind::SingleQubit;
    uint32_t q0 = 0;  ///< target (single qubit), first qubit (CZ) or control (CNOT)
    uint32_t q1 = 0;  ///< second qubit (CZ) or target (CNOT); unused for single-qubit gates
    int c1_index = 0;

    static CliffordGate single(uint32_t q, int index);
    static CliffordGate cz(uint32_t a, uint32_t b);
    static CliffordGate cnot(uint32_t control, uint32_t target);

    bool two_qubit() const { return kind != GateKind::SingleQubit; }
    bool operator==(const CliffordGate &) const = default;
};

/// Local 4x4 unitary of a two-qubit gate, in the basis |b_first + 2 b_second>.
Mat4 two_qubit_matrix(GateKind kind);

/// Returns g p g^dagger. Throws std::out_of_range if the gate does not fit in p.
PauliString conjugate(const CliffordGate &g, const PauliString &p);
/// Returns g^dagger p g.
PauliString conjugate_adjoint(const CliffordGate &g, const PauliString &p);

/// In-place variants used by the propagation kernels; skip range checks.
void conjugate_in_place(const CliffordGate &g, PauliString &p);
void conjugate_adjoint_in_place(const CliffordGate &g, PauliString &p);

/// In-place single-qubit conjugation by a C1 element (forward or adjoint direction).
void conjugate_c1_in_place(int index, uint32_t q, bool adjoint, PauliString &p);

}  // namespace qem

#endif
