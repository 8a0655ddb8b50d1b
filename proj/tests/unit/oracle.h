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

// Dense-matrix reference implementations used as test oracles. Built from raw
// Pauli matrices and basis loops only; basis index bit q is qubit q.
#ifndef QEMICS_TESTS_ORACLE_H
#define QEMICS_TESTS_ORACLE_H

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "qemics/circuit.h"
#include "qemics/pauli.h"

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat pauli(char c) {
    Mat m = Mat::Zero(2, 2);
    switch (c) {
        case 'I':
            m << 1, 0, 0, 1;
            break;
        case 'X':
            m << 0, 1, 1, 0;
            break;
        case 'Y':
            m << 0, cd(0, -1), cd(0, 1), 0;
            break;
        case 'Z':
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); i++)
        for (int j = 0; j < a.cols(); j++) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// text[q] acts on qubit q; qubit 0 is the least significant bit.
inline Mat pauli_string(const std::string &text) {
    Mat m = Mat::Identity(1, 1);
    for (char c : text) m = kron(pauli(c), m);
    return m;
}

inline Mat to_matrix(const qem::PauliString &p) {
    std::string s;
    for (size_t q = 0; q < p.num_qubits(); q++) s += qem::pauli_char(p.get(q));
    static const cd phases[4] = {1, cd(0, 1), -1, cd(0, -1)};
    return phases[p.phase()] * pauli_string(s);
}

inline Mat embed_single(const Mat &u, size_t q, size_t n) {
    const size_t dim = size_t{1} << n, bit = size_t{1} << q;
    Mat out = Mat::Zero(dim, dim);
    for (size_t k = 0; k < dim; k++) {
        size_t b = (k >> q) & 1;
        for (size_t b2 = 0; b2 < 2; b2++) out((k & ~bit) | (b2 << q), k) = u(b2, b);
    }
    return out;
}

inline Mat cz(size_t a, size_t b, size_t n) {
    const size_t dim = size_t{1} << n;
    Mat out = Mat::Identity(dim, dim);
    for (size_t k = 0; k < dim; k++)
        if (((k >> a) & 1) && ((k >> b) & 1)) out(k, k) = -1;
    return out;
}

inline Mat cnot(size_t c, size_t t, size_t n) {
    const size_t dim = size_t{1} << n;
    Mat out = Mat::Zero(dim, dim);
    for (size_t k = 0; k < dim; k++) out(((k >> c) & 1) ? k ^ (size_t{1} << t) : k, k) = 1;
    return out;
}

inline Mat gate_matrix(const qem::Circuit &c, size_t element) {
    const auto &e = c.frame().elements()[element];
    const size_t n = c.num_qubits();
    if (e.is_slot) return embed_single(c.slots()[e.slot_index].matrix(), e.qubit, n);
    return e.gate.kind == qem::GateKind::CZ ? cz(e.gate.q0, e.gate.q1, n) : cnot(e.gate.q0, e.gate.q1, n);
}

inline Mat circuit_unitary(const qem::Circuit &c) {
    const size_t dim = size_t{1} << c.num_qubits();
    Mat u = Mat::Identity(dim, dim);
    for (size_t i = 0; i < c.frame().elements().size(); i++) u = gate_matrix(c, i) * u;
    return u;
}

inline Mat zero_state(size_t n) {
    const size_t dim = size_t{1} << n;
    Mat rho = Mat::Zero(dim, dim);
    rho(0, 0) = 1;
    return rho;
}

// Two-qubit gate depolarising in summation form: (1 - 16e/15) rho + (e/15) sum over the 15 non-identity P of P rho P.
inline Mat depolarise_pair(const Mat &rho, size_t a, size_t b, size_t n, double eps) {
    Mat out = (1 - eps) * rho;
    const char *ps = "IXYZ";
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++) {
            if (!i && !j) continue;
            Mat p = embed_single(pauli(ps[i]), a, n) * embed_single(pauli(ps[j]), b, n);
            out += eps / 15 * p * rho * p.adjoint();
        }
    return out;
}

inline Mat dephase(const Mat &rho, size_t q, size_t n, double eps) {
    Mat z = embed_single(pauli('Z'), q, n);
    return (1 - eps) * rho + eps * z * rho * z;
}

// Noisy evolution where each two-qubit gate is followed by `after(rho, a, b)`.
template <typename F>
Mat evolve(const qem::Circuit &c, F after) {
    Mat rho = zero_state(c.num_qubits());
    for (size_t i = 0; i < c.frame().elements().size(); i++) {
        Mat g = gate_matrix(c, i);
        rho = g * rho * g.adjoint();
        const auto &e = c.frame().elements()[i];
        if (!e.is_slot) rho = after(rho, e.gate.q0, e.gate.q1);
    }
    return rho;
}

inline double expect(const Mat &rho, const qem::PauliString &q) { return (to_matrix(q) * rho).trace().real(); }

// Signed Pauli string equal to m, found by brute-force trace overlap; throws if m is not one.
inline qem::PauliString decompose(const Mat &m, size_t n) {
    const char *ps = "IXZY";
    const size_t dim = size_t{1} << n;
    for (size_t code = 0; code < (size_t{1} << (2 * n)); code++) {
        std::string s;
        for (size_t q = 0; q < n; q++) s += ps[(code >> (2 * q)) & 3];
        cd t = (pauli_string(s).adjoint() * m).trace() / static_cast<double>(dim);
        if (std::abs(std::abs(t) - 1) < 1e-9) {
            qem::PauliString p = qem::PauliString::from_str(s);
            for (uint8_t k = 0; k < 4; k++) {
                p.set_phase(k);
                if ((to_matrix(p) - m).norm() < 1e-9) return p;
            }
        }
    }
    throw std::runtime_error("matrix is not a signed Pauli string");
}

}  // namespace oracle

#endif
