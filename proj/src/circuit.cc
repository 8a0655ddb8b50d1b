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

#include "qemics/circuit.h"

#include <cmath>
#include <stdexcept>

#include "qemics/ics.h"

namespace qem {

CircuitFrame::CircuitFrame(size_t num_qubits, std::vector<FrameElement> elements, PauliString observable)
    : n_(num_qubits), elements_(std::move(elements)), observable_(std::move(observable)) {
    if (n_ == 0) {
        throw std::invalid_argument("frame needs at least one qubit");
    }
    if (observable_.num_qubits() != n_) {
        throw std::invalid_argument("observable size does not match the frame");
    }
    if (!observable_.hermitian()) {
        throw std::invalid_argument("observable must be a Hermitian Pauli");
    }
    if (elements_.size() < n_) {
        throw std::invalid_argument("frame must start with one slot per qubit");
    }
    std::vector<bool> last_is_slot(n_, false);
    for (size_t i = 0; i < elements_.size(); i++) {
        FrameElement &e = elements_[i];
        if (i < n_ && !(e.is_slot && e.qubit == i)) {
            throw std::invalid_argument("frame must start with one slot per qubit, in qubit order");
        }
        if (e.is_slot) {
            if (e.qubit >= n_) {
                throw std::invalid_argument("slot qubit out of range");
            }
            e.slot_index = static_cast<uint32_t>(slot_qubits_.size());
            slot_qubits_.push_back(e.qubit);
            last_is_slot[e.qubit] = true;
        } else {
            const CliffordGate &g = e.gate;
            if (g.kind != GateKind::CZ && g.kind != GateKind::CNOT) {
                throw std::invalid_argument("frame gates must be CZ or CNOT");
            }
            if (g.q0 >= n_ || g.q1 >= n_ || g.q0 == g.q1) {
                throw std::invalid_argument("two-qubit gate qubits invalid");
            }
            last_is_slot[g.q0] = false;
            last_is_slot[g.q1] = false;
            two_qubit_count_++;
        }
    }
    for (size_t q = 0; q < n_; q++) {
        if (!last_is_slot[q]) {
            throw std::invalid_argument("every qubit must end with a slot before measurement");
        }
    }
}

SlotGate SlotGate::from_clifford(int index) {
    if (index < 0 || index >= kC1Size) {
        throw std::out_of_range("C1 index out of range");
    }
    return SlotGate{index, Mat2::Identity()};
}

SlotGate SlotGate::from_unitary(const Mat2 &u) {
    if ((u.adjoint() * u - Mat2::Identity()).norm() > 1e-10) {
        throw std::invalid_argument("slot gate is not unitary");
    }
    return SlotGate{-1, u};
}

Mat2 SlotGate::matrix() const { return is_clifford() ? c1_element(clifford).matrix : unitary; }

Circuit::Circuit(std::shared_ptr<const CircuitFrame> frame, std::vector<SlotGate> slots)
    : frame_(std::move(frame)), slots_(std::move(slots)) {
    if (!frame_) {
        throw std::invalid_argument("circuit needs a frame");
    }
    if (slots_.size() != frame_->num_slots()) {
        throw std::invalid_argument("slot binding count does not match the frame");
    }
}

bool Circuit::is_clifford() const {
    for (const auto &s : slots_) {
        if (!s.is_clifford()) {
            return false;
        }
    }
    return true;
}

CliffordGate Circuit::clifford_gate(size_t element) const {
    const FrameElement &e = frame_->elements()[element];
    if (!e.is_slot) {
        return e.gate;
    }
    const SlotGate &s = slots_[e.slot_index];
    if (!s.is_clifford()) {
        throw std::invalid_argument("slot holds a non-Clifford gate");
    }
    return CliffordGate::single(e.qubit, s.clifford);
}

std::string to_string(FrameKind kind) {
    switch (kind) {
        case FrameKind::PeriodicCycling:
            return "periodic_cycling";
        case FrameKind::LinearNetwork:
            return "linear_network";
        case FrameKind::AllToAll:
            return "all_to_all";
    }
    return "unknown";
}

FrameKind frame_kind_from_string(const std::string &name) {
    if (name == "periodic_cycling") return FrameKind::PeriodicCycling;
    if (name == "linear_network") return FrameKind::LinearNetwork;
    if (name == "all_to_all") return FrameKind::AllToAll;
    throw std::invalid_argument("unknown frame family: " + name);
}

namespace {

class FrameBuilder {
   public:
    explicit FrameBuilder(size_t n) : n_(n) {
        for (uint32_t q = 0; q < n; q++) {
            elements_.push_back(FrameElement::slot(q));
        }
    }

    void gate_with_slots(GateKind kind, uint32_t a, uint32_t b) {
        CliffordGate g = kind == GateKind::CZ ? CliffordGate::cz(a, b) : CliffordGate::cnot(a, b);
        elements_.push_back(FrameElement::two_qubit(g));
        elements_.push_back(FrameElement::slot(a));
        elements_.push_back(FrameElement::slot(b));
    }

    std::shared_ptr<const CircuitFrame> finish(PauliString observable) {
        // Gates are always followed by slots on both qubits, so the trailing layer
        // already exists; this only matters for hand-built element lists.
        std::vector<bool> last_is_slot(n_, true);
        for (size_t i = n_; i < elements_.size(); i++) {
            const FrameElement &e = elements_[i];
            if (e.is_slot) {
                last_is_slot[e.qubit] = true;
            } else {
                last_is_slot[e.gate.q0] = last_is_slot[e.gate.q1] = false;
            }
        }
        for (uint32_t q = 0; q < n_; q++) {
            if (!last_is_slot[q]) {
                elements_.push_back(FrameElement::slot(q));
            }
        }
        return std::make_shared<const CircuitFrame>(n_, std::move(elements_), std::move(observable));
    }

   private:
    size_t n_;
    std::vector<FrameElement> elements_;
};

PauliString random_iz_observable(size_t n, Rng &rng) {
    PauliString obs(n);
    do {
        for (size_t q = 0; q < n; q++) {
            obs.set(q, uniform_index(rng, 2) ? Pauli::Z : Pauli::I);
        }
    } while (obs.is_identity());
    return obs;
}

}  // namespace

std::shared_ptr<const CircuitFrame> build_frame(const FrameFamily &family) {
    const size_t n = family.num_qubits;
    if (n < 2) {
        throw std::invalid_argument("frame families need at least two qubits");
    }
    if (family.two_qubit_count < 1) {
        throw std::invalid_argument("frame families need at least one two-qubit gate");
    }
    if (family.gate != GateKind::CZ && family.gate != GateKind::CNOT) {
        throw std::invalid_argument("frame gate must be CZ or CNOT");
    }
    Rng rng = make_rng(family.seed, 0xF4A3E);
    FrameBuilder builder(n);

    switch (family.kind) {
        case FrameKind::PeriodicCycling: {
            if (n % 2 != 0) {
                throw std::invalid_argument("periodic-cycling frames need an even qubit count");
            }
            std::vector<std::pair<uint32_t, uint32_t>> period;
            for (uint32_t i = 0; i < n / 2; i++) {
                period.emplace_back(2 * i, 2 * i + 1);
            }
            for (uint32_t i = 0; i < n / 2; i++) {
                uint32_t a = 2 * i + 1;
                uint32_t b = static_cast<uint32_t>((2 * i + 2) % n);
                if (b == 0 && !family.periodic_wrap) {
                    continue;
                }
                period.emplace_back(a, b);
            }
            for (size_t k = 0; k < family.two_qubit_count; k++) {
                const auto &[a, b] = period[k % period.size()];
                builder.gate_with_slots(family.gate, a, b);
            }
            return builder.finish(PauliString::single(n, 0, Pauli::Z));
        }
        case FrameKind::LinearNetwork: {
            PauliString obs = random_iz_observable(n, rng);
            for (size_t k = 0; k < family.two_qubit_count; k++) {
                auto i = static_cast<uint32_t>(1 + uniform_index(rng, n - 1));
                builder.gate_with_slots(family.gate, i - 1, i);
            }
            return builder.finish(std::move(obs));
        }
        case FrameKind::AllToAll: {
            PauliString obs = random_iz_observable(n, rng);
            for (size_t k = 0; k < family.two_qubit_count; k++) {
                auto i = static_cast<uint32_t>(uniform_index(rng, n));
                auto j = static_cast<uint32_t>(uniform_index(rng, n - 1));
                if (j >= i) {
                    j++;
                }
                builder.gate_with_slots(family.gate, i, j);
            }
            return builder.finish(std::move(obs));
        }
    }
    throw std::invalid_argument("unknown frame family");
}

Mat2 haar_unitary(Rng &rng) {
    using cd = std::complex<double>;
    Mat2 g;
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            g(r, c) = cd(standard_normal(rng), standard_normal(rng)) / std::sqrt(2.0);
        }
    }
    // Gram-Schmidt on the columns, keeping the diagonal of R real and positive.
    Eigen::Vector2cd c0 = g.col(0);
    c0 /= c0.norm();
    Eigen::Vector2cd c1 = g.col(1) - c0 * c0.dot(g.col(1));
    c1 /= c1.norm();
    Mat2 q;
    q.col(0) = c0;
    q.col(1) = c1;
    return q;
}

Mat2 rotation(double angle, double nx, double ny, double nz) {
    using cd = std::complex<double>;
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    Mat2 r;
    r(0, 0) = cd(c, -s * nz);
    r(0, 1) = cd(-s * ny, -s * nx);
    r(1, 0) = cd(s * ny, -s * nx);
    r(1, 1) = cd(c, s * nz);
    return r;
}

Circuit bind_random_unitary(const std::shared_ptr<const CircuitFrame> &frame, Rng &rng) {
    std::vector<SlotGate> slots;
    slots.reserve(frame->num_slots());
    for (size_t k = 0; k < frame->num_slots(); k++) {
        slots.push_back(SlotGate{-1, haar_unitary(rng)});
    }
    return Circuit(frame, std::move(slots));
}

Circuit bind_cliffords(const std::shared_ptr<const CircuitFrame> &frame, const std::vector<int> &indices) {
    std::vector<SlotGate> slots;
    slots.reserve(indices.size());
    for (int k : indices) {
        slots.push_back(SlotGate::from_clifford(k));
    }
    return Circuit(frame, std::move(slots));
}

Circuit bind_near_one_fc(const std::shared_ptr<const CircuitFrame> &frame, double rotation_scale, Rng &rng) {
    if (rotation_scale < 0) {
        throw std::invalid_argument("rotation_scale must be nonnegative");
    }
    Circuit circuit = es_circuit(frame, random_pattern(*frame, rng), rng);
    if (rotation_scale == 0) {
        return circuit;
    }
    for (SlotGate &s : circuit.mutable_slots()) {
        double angle = uniform(rng, -rotation_scale, rotation_scale);
        double z = uniform(rng, -1.0, 1.0);
        double phi = uniform(rng, 0.0, 2 * M_PI);
        double rho = std::sqrt(std::max(0.0, 1 - z * z));
        s = SlotGate{-1, rotation(angle, rho * std::cos(phi), rho * std::sin(phi), z) * s.matrix()};
    }
    return circuit;
}

}  // namespace qem
