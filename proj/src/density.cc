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

#include "qemics/density.h"

#include <cmath>
#include <stdexcept>

namespace qem {

namespace {

using cd = std::complex<double>;
using Super1 = Eigen::Matrix<cd, 4, 4>;
using Super2 = Eigen::Matrix<cd, 16, 16>;

void check_size(size_t n) {
    if (n < 1 || n > kMaxDensityQubits) {
        throw std::invalid_argument("density simulation supports 1 to 12 qubits");
    }
}

// Row-major vec superoperator of X -> U X U^dagger.
MatX unitary_superop(const MatX &u) {
    const auto d = u.rows();
    MatX s(d * d, d * d);
    for (int r2 = 0; r2 < d; r2++)
        for (int c2 = 0; c2 < d; c2++)
            for (int r = 0; r < d; r++)
                for (int c = 0; c < d; c++) s(r2 * d + c2, r * d + c) = u(r2, r) * std::conj(u(c2, c));
    return s;
}

// Lifts a single-qubit superoperator to one qubit of a pair.
MatX embed_superop(const MatX &s1, int which) {
    MatX s2 = MatX::Zero(16, 16);
    auto split = [which](int k, int &own, int &other) {
        own = which == 0 ? (k & 1) : (k >> 1);
        other = which == 0 ? (k >> 1) : (k & 1);
    };
    for (int r2 = 0; r2 < 4; r2++)
        for (int c2 = 0; c2 < 4; c2++)
            for (int r = 0; r < 4; r++)
                for (int c = 0; c < 4; c++) {
                    int ro2, rx2, co2, cx2, ro, rx, co, cx;
                    split(r2, ro2, rx2);
                    split(c2, co2, cx2);
                    split(r, ro, rx);
                    split(c, co, cx);
                    if (rx2 == rx && cx2 == cx) {
                        s2(r2 * 4 + c2, r * 4 + c) = s1(ro2 * 2 + co2, ro * 2 + co);
                    }
                }
    return s2;
}

struct Op {
    int arity;
    uint32_t q0, q1;
    MatX superop;
};

template <int D, typename Fixed>
void apply_local(MatX &rho, const MatX &superop, const uint32_t *qubits) {
    // D = local dimension (2 or 4); blocks are gathered over local row/col indices.
    const Fixed s = superop;
    const size_t dim = rho.rows();
    size_t offset[D];
    size_t mask = 0;
    for (int a = 0; a < D; a++) {
        offset[a] = 0;
        for (int b = 0; (1 << b) < D; b++) {
            if ((a >> b) & 1) offset[a] |= size_t{1} << qubits[b];
        }
    }
    for (int b = 0; (1 << b) < D; b++) mask |= size_t{1} << qubits[b];
    Eigen::Matrix<cd, D * D, 1> v, out;
    for (size_t col = 0; col < dim; col++) {
        if (col & mask) continue;
        for (size_t row = 0; row < dim; row++) {
            if (row & mask) continue;
            for (int a = 0; a < D; a++)
                for (int b = 0; b < D; b++) v(a * D + b) = rho(row | offset[a], col | offset[b]);
            out.noalias() = s * v;
            for (int a = 0; a < D; a++)
                for (int b = 0; b < D; b++) rho(row | offset[a], col | offset[b]) = out(a * D + b);
        }
    }
}

// Q|k> = coeff(k) |k ^ x>.
struct PauliAction {
    size_t x = 0, z = 0;
    cd base;

    explicit PauliAction(const PauliString &q) {
        int ixz = 0;
        for (size_t j = 0; j < q.num_qubits(); j++) {
            if (q.x(j)) x |= size_t{1} << j;
            if (q.z(j)) z |= size_t{1} << j;
            if (q.x(j) && q.z(j)) ixz++;
        }
        static const cd powers[4] = {1.0, cd(0, 1), -1.0, cd(0, -1)};
        base = powers[(q.phase() + ixz) & 3];
    }
    cd coeff(size_t k) const { return std::popcount(z & k) & 1 ? -base : base; }
};

double pauli_trace(const MatX &m, const PauliString &q) {
    if (size_t{1} << q.num_qubits() != static_cast<size_t>(m.rows())) {
        throw std::invalid_argument("observable and state sizes differ");
    }
    PauliAction a(q);
    cd sum = 0;
    for (size_t j = 0; j < static_cast<size_t>(m.rows()); j++) {
        sum += a.coeff(j) * m(j, j ^ a.x);
    }
    return sum.real();
}

}  // namespace

DensityState::DensityState(size_t num_qubits) : n_(num_qubits) {
    check_size(num_qubits);
    rho_ = MatX::Zero(dim(), dim());
    rho_(0, 0) = 1;
}

DensityState DensityState::from_matrix(MatX rho) {
    DensityState s;
    if (rho.rows() != rho.cols() || rho.rows() < 2 || (rho.rows() & (rho.rows() - 1))) {
        throw std::invalid_argument("density matrix must be square with power-of-two size");
    }
    s.n_ = std::countr_zero(static_cast<size_t>(rho.rows()));
    check_size(s.n_);
    s.rho_ = std::move(rho);
    return s;
}

DensityState DensityState::maximally_mixed(size_t num_qubits) {
    check_size(num_qubits);
    const size_t d = size_t{1} << num_qubits;
    return from_matrix(MatX::Identity(d, d) / static_cast<double>(d));
}

void DensityState::apply_superop(const MatX &superop, uint32_t q0, uint32_t q1) {
    if (q0 >= n_ || (superop.rows() == 16 && (q1 >= n_ || q1 == q0))) {
        throw std::out_of_range("superoperator qubits out of range");
    }
    const uint32_t qs[2] = {q0, q1};
    if (superop.rows() == 4) {
        apply_local<2, Super1>(rho_, superop, qs);
    } else if (superop.rows() == 16) {
        apply_local<4, Super2>(rho_, superop, qs);
    } else {
        throw std::invalid_argument("superoperator must act on one or two qubits");
    }
}

void DensityState::apply_channel(const Channel &c, uint32_t q0, uint32_t q1) { apply_superop(c.superoperator(), q0, q1); }

void DensityState::apply_unitary(const Mat2 &u, uint32_t q) { apply_superop(unitary_superop(u), q); }

void DensityState::depolarise(double t) {
    const cd tr = rho_.trace();
    rho_ *= (1 - t);
    for (size_t k = 0; k < dim(); k++) {
        rho_(k, k) += t * tr / static_cast<double>(dim());
    }
}

DensityState run(const Circuit &circuit, const NoiseModel &noise, const std::optional<Channel> &correction) {
    const size_t n = circuit.num_qubits();
    check_size(n);
    if (correction && correction->arity() != 2) {
        throw std::invalid_argument("correction map must act on two qubits");
    }
    // Global depolarising commutes with every unital map, so it is applied once at the end.
    const bool global = noise.is_global();
    std::optional<MatX> gate_noise;
    if (!global && !noise.noiseless()) {
        gate_noise = noise.two_qubit_channel().superoperator();
    }
    if (correction) {
        gate_noise = gate_noise ? MatX(correction->superoperator() * *gate_noise) : correction->superoperator();
    }

    std::vector<Op> ops;
    std::vector<int> last_op(n, -1);
    size_t two_qubit = 0;
    for (const FrameElement &e : circuit.frame().elements()) {
        if (!e.is_slot) {
            two_qubit++;
            MatX s = unitary_superop(two_qubit_matrix(e.gate.kind));
            if (gate_noise) s = *gate_noise * s;
            last_op[e.gate.q0] = last_op[e.gate.q1] = static_cast<int>(ops.size());
            ops.push_back({2, e.gate.q0, e.gate.q1, std::move(s)});
            continue;
        }
        const Mat2 u = circuit.slots()[e.slot_index].matrix();
        MatX s = unitary_superop(u);
        if (auto c = noise.slot_channel(u)) s = c->superoperator() * s;
        // Fuse into the latest op touching this qubit; ops after it act on other qubits.
        const int prev = last_op[e.qubit];
        if (prev >= 0 && ops[prev].arity == 2) {
            ops[prev].superop = embed_superop(s, ops[prev].q0 == e.qubit ? 0 : 1) * ops[prev].superop;
        } else if (prev >= 0) {
            ops[prev].superop = s * ops[prev].superop;
        } else {
            last_op[e.qubit] = static_cast<int>(ops.size());
            ops.push_back({1, e.qubit, 0, std::move(s)});
        }
    }

    DensityState state(n);
    for (const Op &op : ops) {
        state.apply_superop(op.superop, op.q0, op.q1);
    }
    if (global && two_qubit > 0) {
        state.depolarise(1.0 - std::pow(1.0 - noise.global_rate(), static_cast<double>(two_qubit)));
    }
    return state;
}

double expectation(const DensityState &state, const PauliString &q) { return pauli_trace(state.matrix(), q); }

std::pair<double, double> purity_pair(const DensityState &state, const PauliString &q) {
    const MatX sq = state.matrix() * state.matrix();
    return {pauli_trace(sq, q), sq.trace().real()};
}

DensityState apply_inverse_map(DensityState state, double lambda, uint32_t q0, uint32_t q1) {
    state.apply_channel(depolarising_inverse_map(lambda), q0, q1);
    return state;
}

double statevector_expectation(const Circuit &circuit) {
    const size_t n = circuit.num_qubits();
    if (n > 24) {
        throw std::invalid_argument("statevector simulation supports at most 24 qubits");
    }
    const size_t dim = size_t{1} << n;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1;
    for (const FrameElement &e : circuit.frame().elements()) {
        if (e.is_slot) {
            const Mat2 u = circuit.slots()[e.slot_index].matrix();
            const size_t bit = size_t{1} << e.qubit;
            for (size_t k = 0; k < dim; k++) {
                if (k & bit) continue;
                cd a = psi(k), b = psi(k | bit);
                psi(k) = u(0, 0) * a + u(0, 1) * b;
                psi(k | bit) = u(1, 0) * a + u(1, 1) * b;
            }
        } else {
            const size_t b0 = size_t{1} << e.gate.q0, b1 = size_t{1} << e.gate.q1;
            for (size_t k = 0; k < dim; k++) {
                if (!(k & b0) || !(k & b1)) continue;
                if (e.gate.kind == GateKind::CZ) {
                    psi(k) = -psi(k);
                } else {
                    std::swap(psi(k), psi(k ^ b1));
                }
            }
        }
    }
    PauliAction a(circuit.observable());
    cd sum = 0;
    for (size_t j = 0; j < dim; j++) {
        sum += std::conj(psi(j ^ a.x)) * a.coeff(j) * psi(j);
    }
    return sum.real();
}

}  // namespace qem
