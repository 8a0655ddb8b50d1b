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

#ifndef QEMICS_PAULI_H
#define QEMICS_PAULI_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qem {

/// Single-qubit Pauli, encoded as (x bit) | (z bit) << 1 so that Y = X and Z both set.
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// Phase exponent k such that a * b = i^k (a ^ b) for single-qubit Paulis.
uint8_t pauli_product_phase(Pauli a, Pauli b);

/// A signed n-qubit Pauli operator i^phase * P_0 (x) P_1 (x) ... (x) P_{n-1}.
///
/// Stored in symplectic form as packed x and z bit vectors. Each tensor factor
/// is Hermitian (Y means the matrix Y, not XZ), so the operator is Hermitian
/// exactly when the phase is 0 or 2.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(size_t num_qubits);

    /// Parses "[+|-]PPP..." with P in {I, X, Y, Z}. "+i"/"-i" prefixes are accepted
    /// for non-Hermitian values. Throws std::invalid_argument on bad input.
    static PauliString from_str(std::string_view text);
    /// The single-qubit Pauli `p` on qubit `q` of an n-qubit register.
    static PauliString single(size_t num_qubits, size_t q, Pauli p);

    size_t num_qubits() const { return n_; }
    Pauli get(size_t q) const;
    void set(size_t q, Pauli p);
    bool x(size_t q) const { return (xs_[q >> 6] >> (q & 63)) & 1; }
    bool z(size_t q) const { return (zs_[q >> 6] >> (q & 63)) & 1; }

    /// Exponent of i in the overall phase, in 0..3.
    uint8_t phase() const { return phase_; }
    void set_phase(uint8_t k) { phase_ = k & 3; }
    /// +1 or -1; only meaningful when hermitian().
    int sign() const { return phase_ == 2 ? -1 : 1; }
    bool hermitian() const { return (phase_ & 1) == 0; }

    size_t weight() const;
    bool is_identity() const;
    bool commutes(const PauliString &other) const;

    /// Group product with exact phase bookkeeping. Throws on size mismatch.
    PauliString operator*(const PauliString &rhs) const;
    PauliString &operator*=(const PauliString &rhs);

    bool operator==(const PauliString &other) const = default;

    std::string str() const;

    const std::vector<uint64_t> &x_words() const { return xs_; }
    const std::vector<uint64_t> &z_words() const { return zs_; }

   private:
    size_t n_ = 0;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
    uint8_t phase_ = 0;
};

PauliString multiply(const PauliString &p, const PauliString &q);

}  // namespace qem

#endif
