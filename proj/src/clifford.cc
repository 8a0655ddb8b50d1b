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

#include "qemics/clifford.h"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace qem {

namespace {

using cd = std::complex<double>;

}  // namespace

Mat2 pauli_matrix(Pauli p) {
    Mat2 m;
    switch (p) {
        case Pauli::I:
            m << 1, 0, 0, 1;
            break;
        case Pauli::X:
            m << 0, 1, 1, 0;
            break;
        case Pauli::Y:
            m << 0, cd(0, -1), cd(0, 1), 0;
            break;
        case Pauli::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

namespace {

constexpr std::array<Pauli, 4> ALL_PAULIS = {Pauli::I, Pauli::X, Pauli::Z, Pauli::Y};

bool equal_up_to_phase(const Mat2 &a, const Mat2 &b, double tol) {
    return std::abs(std::abs((a.adjoint() * b).trace()) - 2.0) < tol;
}

SignedPauli identify(const Mat2 &m) {
    for (Pauli p : ALL_PAULIS) {
        Mat2 pm = pauli_matrix(p);
        if ((m - pm).norm() < 1e-9) {
            return {p, false};
        }
        if ((m + pm).norm() < 1e-9) {
            return {p, true};
        }
    }
    throw std::logic_error("conjugation image is not a signed Pauli");
}

Mat4 kron_local(const Mat2 &first, const Mat2 &second) {
    Mat4 m;
    for (int a1 = 0; a1 < 2; a1++)
        for (int b1 = 0; b1 < 2; b1++)
            for (int a2 = 0; a2 < 2; a2++)
                for (int b2 = 0; b2 < 2; b2++)
                    m(a1 + 2 * b1, a2 + 2 * b2) = first(a1, a2) * second(b1, b2);
    return m;
}

struct LocalImage {
    Pauli first;
    Pauli second;
    bool negative;
};

using TwoQubitTable = std::array<LocalImage, 16>;

TwoQubitTable build_two_qubit_table(GateKind kind) {
    Mat4 g = two_qubit_matrix(kind);
    TwoQubitTable table{};
    for (Pauli pa : ALL_PAULIS) {
        for (Pauli pb : ALL_PAULIS) {
            Mat4 image = g * kron_local(pauli_matrix(pa), pauli_matrix(pb)) * g.adjoint();
            bool found = false;
            for (Pauli qa : ALL_PAULIS) {
                for (Pauli qb : ALL_PAULIS) {
                    Mat4 cand = kron_local(pauli_matrix(qa), pauli_matrix(qb));
                    int idx = static_cast<int>(pa) + 4 * static_cast<int>(pb);
                    if ((image - cand).norm() < 1e-9) {
                        table[idx] = {qa, qb, false};
                        found = true;
                    } else if ((image + cand).norm() < 1e-9) {
                        table[idx] = {qa, qb, true};
                        found = true;
                    }
                }
            }
            if (!found) {
                throw std::logic_error("two-qubit gate is not Clifford");
            }
        }
    }
    return table;
}

const TwoQubitTable &two_qubit_table(GateKind kind) {
    static const TwoQubitTable cz = build_two_qubit_table(GateKind::CZ);
    static const TwoQubitTable cnot = build_two_qubit_table(GateKind::CNOT);
    return kind == GateKind::CZ ? cz : cnot;
}

std::array<C1Element, kC1Size> build_c1_table() {
    const double r = 1.0 / std::sqrt(2.0);
    Mat2 h;
    h << r, r, r, -r;
    Mat2 s;
    s << 1, 0, 0, cd(0, 1);
    const std::array<std::pair<char, Mat2>, 2> generators = {{{'H', h}, {'S', s}}};

    std::vector<std::pair<Mat2, std::string>> found;
    std::deque<std::pair<Mat2, std::string>> queue;
    queue.emplace_back(Mat2::Identity(), "");
    found.emplace_back(Mat2::Identity(), "");
    while (!queue.empty()) {
        auto [m, word] = queue.front();
        queue.pop_front();
        for (const auto &[name, g] : generators) {
            Mat2 next = g * m;
            bool seen = false;
            for (const auto &f : found) {
                if (equal_up_to_phase(f.first, next, 1e-9)) {
                    seen = true;
                    break;
                }
            }
            if (!seen) {
                found.emplace_back(next, word + name);
                queue.emplace_back(next, word + name);
            }
        }
    }
    if (found.size() != kC1Size) {
        throw std::logic_error("single-qubit Clifford closure did not produce 24 elements");
    }

    std::array<C1Element, kC1Size> table;
    for (int k = 0; k < kC1Size; k++) {
        const Mat2 &m = found[k].first;
        table[k].matrix = m;
        table[k].word = found[k].second;
        for (Pauli p : ALL_PAULIS) {
            Mat2 pm = pauli_matrix(p);
            table[k].forward[static_cast<int>(p)] = identify(m * pm * m.adjoint());
            table[k].adjoint[static_cast<int>(p)] = identify(m.adjoint() * pm * m);
        }
    }
    return table;
}

int find_pauli_element(Pauli p) { return c1_index_of(pauli_matrix(p)); }

}  // namespace

const std::array<C1Element, kC1Size> &c1_table() {
    static const std::array<C1Element, kC1Size> table = build_c1_table();
    return table;
}

const C1Element &c1_element(int index) {
    if (index < 0 || index >= kC1Size) {
        throw std::out_of_range("C1 index out of range");
    }
    return c1_table()[index];
}

int c1_index_of(const Mat2 &u, double tol) {
    const auto &table = c1_table();
    for (int k = 0; k < kC1Size; k++) {
        if (equal_up_to_phase(table[k].matrix, u, tol)) {
            return k;
        }
    }
    return -1;
}

namespace c1 {
int hadamard() {
    static const int k = [] {
        const double r = 1.0 / std::sqrt(2.0);
        Mat2 h;
        h << r, r, r, -r;
        return c1_index_of(h);
    }();
    return k;
}
int phase_s() {
    static const int k = [] {
        Mat2 s;
        s << 1, 0, 0, cd(0, 1);
        return c1_index_of(s);
    }();
    return k;
}
int pauli_x() {
    static const int k = find_pauli_element(Pauli::X);
    return k;
}
int pauli_y() {
    static const int k = find_pauli_element(Pauli::Y);
    return k;
}
int pauli_z() {
    static const int k = find_pauli_element(Pauli::Z);
    return k;
}
}  // namespace c1

const std::vector<int> &cliffords_mapping_to_z(Pauli p) {
    static const std::array<std::vector<int>, 4> sets = [] {
        std::array<std::vector<int>, 4> out;
        const auto &table = c1_table();
        for (Pauli q : ALL_PAULIS) {
            for (int k = 0; k < kC1Size; k++) {
                Pauli image = table[k].adjoint[static_cast<int>(q)].pauli;
                if (q == Pauli::I || image == Pauli::Z) {
                    out[static_cast<int>(q)].push_back(k);
                }
            }
        }
        return out;
    }();
    return sets[static_cast<int>(p)];
}

CliffordGate CliffordGate::single(uint32_t q, int index) {
    if (index < 0 || index >= kC1Size) {
        throw std::out_of_range("C1 index out of range");
    }
    return CliffordGate{GateKind::SingleQubit, q, 0, index};
}

CliffordGate CliffordGate::cz(uint32_t a, uint32_t b) {
    if (a == b) {
        throw std::invalid_argument("CZ qubits must be distinct");
    }
    return CliffordGate{GateKind::CZ, a, b, 0};
}

CliffordGate CliffordGate::cnot(uint32_t control, uint32_t target) {
    if (control == target) {
        throw std::invalid_argument("CNOT qubits must be distinct");
    }
    return CliffordGate{GateKind::CNOT, control, target, 0};
}

Mat4 two_qubit_matrix(GateKind kind) {
    Mat4 m = Mat4::Zero();
    switch (kind) {
        case GateKind::CZ:
            m(0, 0) = m(1, 1) = m(2, 2) = 1;
            m(3, 3) = -1;
            break;
        case GateKind::CNOT:
            // |c + 2t> -> |c + 2(t xor c)>
            m(0, 0) = m(2, 2) = 1;
            m(3, 1) = m(1, 3) = 1;
            break;
        case GateKind::SingleQubit:
            throw std::invalid_argument("two_qubit_matrix: not a two-qubit gate");
    }
    return m;
}

void conjugate_c1_in_place(int index, uint32_t q, bool adjoint, PauliString &p) {
    const C1Element &e = c1_table()[index];
    Pauli before = p.get(q);
    const SignedPauli &image = adjoint ? e.adjoint[static_cast<int>(before)] : e.forward[static_cast<int>(before)];
    p.set(q, image.pauli);
    if (image.negative) {
        p.set_phase(p.phase() + 2);
    }
}

void conjugate_in_place(const CliffordGate &g, PauliString &p) {
    if (g.kind == GateKind::SingleQubit) {
        conjugate_c1_in_place(g.c1_index, g.q0, false, p);
        return;
    }
    // CZ and CNOT are Hermitian, so forward and adjoint conjugation coincide.
    const LocalImage &image =
        two_qubit_table(g.kind)[static_cast<int>(p.get(g.q0)) + 4 * static_cast<int>(p.get(g.q1))];
    p.set(g.q0, image.first);
    p.set(g.q1, image.second);
    if (image.negative) {
        p.set_phase(p.phase() + 2);
    }
}

void conjugate_adjoint_in_place(const CliffordGate &g, PauliString &p) {
    if (g.kind == GateKind::SingleQubit) {
        conjugate_c1_in_place(g.c1_index, g.q0, true, p);
        return;
    }
    conjugate_in_place(g, p);
}

namespace {
void check_range(const CliffordGate &g, const PauliString &p) {
    if (g.q0 >= p.num_qubits() || (g.two_qubit() && g.q1 >= p.num_qubits())) {
        throw std::out_of_range("gate qubit outside Pauli string");
    }
}
}  // namespace

PauliString conjugate(const CliffordGate &g, const PauliString &p) {
    check_range(g, p);
    PauliString out = p;
    conjugate_in_place(g, out);
    return out;
}

PauliString conjugate_adjoint(const CliffordGate &g, const PauliString &p) {
    check_range(g, p);
    PauliString out = p;
    conjugate_adjoint_in_place(g, out);
    return out;
}

}  // namespace qem
