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

#include "qemics/pauli.h"

#include <bit>
#include <stdexcept>

namespace qem {

namespace {

size_t word_count(size_t n) { return (n + 63) / 64; }

// PHASE[a][b] = k with a * b = i^k (a xor b), indices in Pauli encoding order I, X, Z, Y.
constexpr uint8_t PHASE[4][4] = {
    // I  X  Z  Y
    {0, 0, 0, 0},  // I
    {0, 0, 3, 1},  // X: XZ = -iY, XY = iZ
    {0, 1, 0, 3},  // Z: ZX = iY, ZY = -iX
    {0, 3, 1, 0},  // Y: YX = -iZ, YZ = iX
};

}  // namespace

char pauli_char(Pauli p) {
    static constexpr char CHARS[4] = {'I', 'X', 'Z', 'Y'};
    return CHARS[static_cast<uint8_t>(p)];
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case '_':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Y':
            return Pauli::Y;
        case 'Z':
            return Pauli::Z;
        default:
            throw std::invalid_argument(std::string("not a Pauli character: '") + c + "'");
    }
}

uint8_t pauli_product_phase(Pauli a, Pauli b) { return PHASE[static_cast<uint8_t>(a)][static_cast<uint8_t>(b)]; }

PauliString::PauliString(size_t num_qubits)
    : n_(num_qubits), xs_(word_count(num_qubits), 0), zs_(word_count(num_qubits), 0) {}

PauliString PauliString::from_str(std::string_view text) {
    uint8_t phase = 0;
    if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
        phase = text[0] == '-' ? 2 : 0;
        text.remove_prefix(1);
        if (!text.empty() && text[0] == 'i') {
            phase = (phase + 1) & 3;
            text.remove_prefix(1);
        }
    }
    PauliString result(text.size());
    for (size_t q = 0; q < text.size(); q++) {
        result.set(q, pauli_from_char(text[q]));
    }
    result.phase_ = phase;
    return result;
}

PauliString PauliString::single(size_t num_qubits, size_t q, Pauli p) {
    if (q >= num_qubits) {
        throw std::out_of_range("qubit index out of range");
    }
    PauliString result(num_qubits);
    result.set(q, p);
    return result;
}

Pauli PauliString::get(size_t q) const { return static_cast<Pauli>(uint8_t(x(q)) | (uint8_t(z(q)) << 1)); }

void PauliString::set(size_t q, Pauli p) {
    uint64_t mask = uint64_t{1} << (q & 63);
    auto v = static_cast<uint8_t>(p);
    if (v & 1) {
        xs_[q >> 6] |= mask;
    } else {
        xs_[q >> 6] &= ~mask;
    }
    if (v & 2) {
        zs_[q >> 6] |= mask;
    } else {
        zs_[q >> 6] &= ~mask;
    }
}

size_t PauliString::weight() const {
    size_t w = 0;
    for (size_t k = 0; k < xs_.size(); k++) {
        w += std::popcount(xs_[k] | zs_[k]);
    }
    return w;
}

bool PauliString::is_identity() const { return weight() == 0; }

bool PauliString::commutes(const PauliString &other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("commutes: qubit count mismatch");
    }
    uint64_t parity = 0;
    for (size_t k = 0; k < xs_.size(); k++) {
        parity ^= (xs_[k] & other.zs_[k]) ^ (zs_[k] & other.xs_[k]);
    }
    return (std::popcount(parity) & 1) == 0;
}

PauliString &PauliString::operator*=(const PauliString &rhs) {
    if (rhs.n_ != n_) {
        throw std::invalid_argument("multiply: qubit count mismatch");
    }
    unsigned phase = phase_ + rhs.phase_;
    for (size_t q = 0; q < n_; q++) {
        phase += pauli_product_phase(get(q), rhs.get(q));
    }
    for (size_t k = 0; k < xs_.size(); k++) {
        xs_[k] ^= rhs.xs_[k];
        zs_[k] ^= rhs.zs_[k];
    }
    phase_ = phase & 3;
    return *this;
}

PauliString PauliString::operator*(const PauliString &rhs) const {
    PauliString result = *this;
    result *= rhs;
    return result;
}

std::string PauliString::str() const {
    static constexpr const char *PREFIX[4] = {"+", "+i", "-", "-i"};
    std::string out = PREFIX[phase_];
    for (size_t q = 0; q < n_; q++) {
        out.push_back(pauli_char(get(q)));
    }
    return out;
}

PauliString multiply(const PauliString &p, const PauliString &q) { return p * q; }

}  // namespace qem
