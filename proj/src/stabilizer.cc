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

#include "qemics/stabilizer.h"

#include <cmath>
#include <stdexcept>

namespace qem {

namespace {

void apply_adjoint(const Circuit &circuit, size_t element, PauliString &p) {
    conjugate_adjoint_in_place(circuit.clifford_gate(element), p);
}

int local_index(const PauliString &p, const CliffordGate &g) {
    return static_cast<int>(p.get(g.q0)) + 4 * static_cast<int>(p.get(g.q1));
}

PauliString embed_local(size_t n, const CliffordGate &g, int local) {
    PauliString p(n);
    p.set(g.q0, static_cast<Pauli>(local & 3));
    p.set(g.q1, static_cast<Pauli>(local >> 2));
    return p;
}

// Probability of each of the three single-qubit Pauli factors reproducing depolarising at eps_s.
double single_qubit_product_probability(double eps_s) {
    return 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * eps_s / 3.0));
}

void require_clifford(const Circuit &circuit) {
    if (!circuit.is_clifford()) {
        throw std::invalid_argument("circuit contains a non-Clifford slot gate");
    }
}

// Running product kept as a sign and a log magnitude.
struct LogProduct {
    double log_abs = 0;
    int sign = 1;
    bool zero = false;

    void mul(double v) {
        if (v == 0) {
            zero = true;
        } else {
            if (v < 0) sign = -sign;
            log_abs += std::log(std::abs(v));
        }
    }
    double value() const { return zero ? 0.0 : sign * std::exp(log_abs); }
};

}  // namespace

PauliString effective_observable(const Circuit &circuit) {
    require_clifford(circuit);
    PauliString q = circuit.observable();
    for (size_t i = circuit.num_gates(); i-- > 0;) {
        apply_adjoint(circuit, i, q);
    }
    return q;
}

int expectation_on_zero_state(const PauliString &p) {
    for (size_t q = 0; q < p.num_qubits(); q++) {
        if (p.x(q)) {
            return 0;
        }
    }
    return p.sign();
}

int ideal_expectation(const Circuit &circuit) { return expectation_on_zero_state(effective_observable(circuit)); }

size_t circuit_weight(const Circuit &circuit) { return effective_observable(circuit).weight(); }

PauliString propagate_error(const Circuit &circuit, size_t position, const PauliString &sigma) {
    if (position > circuit.num_gates()) {
        throw std::out_of_range("error position beyond the end of the circuit");
    }
    if (sigma.num_qubits() != circuit.num_qubits()) {
        throw std::invalid_argument("error and circuit sizes differ");
    }
    PauliString p = sigma;
    for (size_t i = position; i < circuit.num_gates(); i++) {
        conjugate_in_place(circuit.clifford_gate(i), p);
    }
    return p;
}

std::vector<PropagatedChannel> propagate_channels(const Circuit &circuit, const NoiseModel &model) {
    require_clifford(circuit);
    std::vector<PropagatedChannel> out;
    if (model.kind == NoiseKind::GlobalDepolarising || model.kind == NoiseKind::Composite) {
        throw std::invalid_argument("noise model has no local product form: " + to_string(model.kind));
    }
    const auto factors = model.kind == NoiseKind::GateDependent
                             ? NoiseModel::gate_depolarising(model.epsilon, model.r).product_factors()
                             : model.product_factors();
    const size_t n = circuit.num_qubits();
    const auto &elements = circuit.frame().elements();
    for (size_t i = 0; i < elements.size(); i++) {
        const FrameElement &e = elements[i];
        if (!e.is_slot) {
            for (auto [local, p] : factors) {
                PauliString sigma = embed_local(n, e.gate, local);
                out.push_back({i, sigma, propagate_error(circuit, i + 1, sigma), p});
            }
        } else if (model.has_slot_noise()) {
            double eps_s = gate_dependent_rate(circuit.slots()[e.slot_index].matrix(), model.epsilon * model.r);
            double p = single_qubit_product_probability(eps_s);
            for (Pauli f : {Pauli::X, Pauli::Z, Pauli::Y}) {
                PauliString sigma = PauliString::single(n, e.qubit, f);
                out.push_back({i, sigma, propagate_error(circuit, i + 1, sigma), p});
            }
        }
    }
    return out;
}

double pauli_noise_expectation(const Circuit &circuit, const std::vector<PropagatedChannel> &channels) {
    const int f = ideal_expectation(circuit);
    const PauliString &q = circuit.observable();
    double log_y = 0;
    for (const PropagatedChannel &c : channels) {
        if (!(c.probability >= 0 && c.probability < 0.5)) {
            throw std::invalid_argument("channel probability must lie in [0, 1/2)");
        }
        if (!c.propagated.commutes(q)) {
            log_y += std::log1p(-2 * c.probability);
        }
    }
    return f == 0 ? 0.0 : f * std::exp(log_y);
}

double pauli_noise_expectation(const Circuit &circuit, const NoiseModel &model,
                               const std::optional<Channel> &correction) {
    require_clifford(circuit);
    if (!model.is_pauli()) {
        throw std::invalid_argument("noise model is not a Pauli model");
    }
    std::array<double, 16> eig;
    eig.fill(1.0);
    double global_factor = 1.0;
    if (model.is_global()) {
        global_factor = 1.0 - model.global_rate();
        if (correction) {
            for (int k = 0; k < 16; k++) eig[k] = correction->pauli_eigenvalue(k);
        }
    } else if (!model.noiseless() || correction) {
        Channel c = model.two_qubit_channel();
        if (correction) {
            c = correction->after(c);
        }
        if (!c.is_pauli()) {
            throw std::invalid_argument("gate channel is not a Pauli map");
        }
        for (int k = 0; k < 16; k++) eig[k] = c.pauli_eigenvalue(k);
    }

    LogProduct y;
    PauliString q = circuit.observable();
    const auto &elements = circuit.frame().elements();
    for (size_t i = elements.size(); i-- > 0;) {
        const FrameElement &e = elements[i];
        if (!e.is_slot) {
            y.mul(eig[local_index(q, e.gate)] * global_factor);
        } else if (model.has_slot_noise() && q.get(e.qubit) != Pauli::I) {
            double eps_s = gate_dependent_rate(circuit.slots()[e.slot_index].matrix(), model.epsilon * model.r);
            y.mul(1.0 - 4.0 * eps_s / 3.0);
        }
        apply_adjoint(circuit, i, q);
    }
    y.mul(expectation_on_zero_state(q));
    return y.value();
}

std::vector<Pauli> propagated_factors_on_qubit(const Circuit &circuit, const std::array<Pauli, 2> &inserted,
                                               uint32_t qubit) {
    require_clifford(circuit);
    // The propagated error has an X part on `qubit` iff it anticommutes with Z there, and a
    // Z part iff it anticommutes with X; test against the back-propagated X and Z instead.
    const size_t n = circuit.num_qubits();
    PauliString bx = PauliString::single(n, qubit, Pauli::X);
    PauliString bz = PauliString::single(n, qubit, Pauli::Z);
    std::vector<Pauli> out;
    const auto &elements = circuit.frame().elements();
    for (size_t i = elements.size(); i-- > 0;) {
        const FrameElement &e = elements[i];
        if (!e.is_slot) {
            PauliString sigma(n);
            sigma.set(e.gate.q0, inserted[0]);
            sigma.set(e.gate.q1, inserted[1]);
            bool has_x = !sigma.commutes(bz);
            bool has_z = !sigma.commutes(bx);
            out.push_back(static_cast<Pauli>(int(has_x) | (int(has_z) << 1)));
        }
        apply_adjoint(circuit, i, bx);
        apply_adjoint(circuit, i, bz);
    }
    return {out.rbegin(), out.rend()};
}

}  // namespace qem
