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

#include "qemics/circuit_io.h"

#include <stdexcept>

namespace qem {

using nlohmann::json;

namespace {

template <typename F>
auto guarded(const char *what, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("malformed ") + what + ": " + e.what());
    }
}

}  // namespace

GateKind gate_kind_from_string(const std::string &name) {
    if (name == "cz") return GateKind::CZ;
    if (name == "cnot") return GateKind::CNOT;
    throw std::invalid_argument("unknown two-qubit gate: " + name);
}

std::string gate_kind_name(GateKind kind) { return kind == GateKind::CNOT ? "cnot" : "cz"; }

json frame_to_json(const CircuitFrame &frame) {
    json elements = json::array();
    for (const FrameElement &e : frame.elements()) {
        if (e.is_slot) {
            elements.push_back({{"slot", e.qubit}});
        } else {
            elements.push_back({{gate_kind_name(e.gate.kind), {e.gate.q0, e.gate.q1}}});
        }
    }
    std::string obs = frame.observable().str();
    if (obs.front() == '+') obs.erase(0, 1);
    return {{"n", frame.num_qubits()}, {"observable", obs}, {"elements", elements}};
}

std::shared_ptr<const CircuitFrame> frame_from_json(const json &j) {
    return guarded("frame", [&] {
        const size_t n = j.at("n").get<size_t>();
        std::vector<FrameElement> elements;
        for (const json &e : j.at("elements")) {
            if (e.contains("slot")) {
                elements.push_back(FrameElement::slot(e.at("slot").get<uint32_t>()));
            } else if (e.contains("cz")) {
                auto q = e.at("cz").get<std::vector<uint32_t>>();
                if (q.size() != 2) throw std::invalid_argument("cz needs two qubits");
                elements.push_back(FrameElement::two_qubit(CliffordGate::cz(q[0], q[1])));
            } else if (e.contains("cnot")) {
                auto q = e.at("cnot").get<std::vector<uint32_t>>();
                if (q.size() != 2) throw std::invalid_argument("cnot needs two qubits");
                elements.push_back(FrameElement::two_qubit(CliffordGate::cnot(q[0], q[1])));
            } else {
                throw std::invalid_argument("unknown frame element: " + e.dump());
            }
        }
        PauliString obs = PauliString::from_str(j.at("observable").get<std::string>());
        return std::make_shared<const CircuitFrame>(n, std::move(elements), std::move(obs));
    });
}

json circuit_to_json(const Circuit &circuit) {
    json j = frame_to_json(circuit.frame());
    json slots = json::array();
    for (const SlotGate &s : circuit.slots()) {
        if (s.is_clifford()) {
            slots.push_back({{"c1", s.clifford}});
        } else {
            json u = json::array();
            for (int r = 0; r < 2; r++)
                for (int c = 0; c < 2; c++) u.push_back({s.unitary(r, c).real(), s.unitary(r, c).imag()});
            slots.push_back({{"u", u}});
        }
    }
    j["slots"] = slots;
    return j;
}

Circuit circuit_from_json(const json &j) {
    auto frame = frame_from_json(j);
    return guarded("circuit", [&] {
        std::vector<SlotGate> slots;
        for (const json &s : j.at("slots")) {
            if (s.contains("c1")) {
                int k = s.at("c1").get<int>();
                if (k < 0 || k >= kC1Size) throw std::invalid_argument("C1 index out of range");
                slots.push_back(SlotGate::from_clifford(k));
            } else {
                const json &u = s.at("u");
                if (u.size() != 4) throw std::invalid_argument("unitary needs four entries");
                Mat2 m;
                for (int k = 0; k < 4; k++) {
                    m(k / 2, k % 2) = {u[k].at(0).get<double>(), u[k].at(1).get<double>()};
                }
                slots.push_back(SlotGate::from_unitary(m));
            }
        }
        return Circuit(frame, std::move(slots));
    });
}

json composite_to_json(const CompositeParams &p) {
    return {{"eps_d", p.eps_d}, {"eps_z", p.eps_z}, {"theta", p.theta}, {"eps_a", p.eps_a}};
}

CompositeParams composite_from_json(const json &j) {
    return guarded("composite parameters", [&] {
        CompositeParams p;
        p.eps_d = j.at("eps_d").get<double>();
        p.eps_z = j.at("eps_z").get<std::array<double, 2>>();
        p.theta = j.at("theta").get<std::array<std::array<double, 3>, 2>>();
        p.eps_a = j.at("eps_a").get<std::array<double, 2>>();
        return p;
    });
}

json noise_to_json(const NoiseModel &m) {
    json j = {{"kind", to_string(m.kind)}, {"r", m.r}};
    switch (m.kind) {
        case NoiseKind::None:
            break;
        case NoiseKind::GateDepolarising:
        case NoiseKind::GateDependent:
        case NoiseKind::GlobalDepolarising:
            j["epsilon"] = m.epsilon;
            break;
        case NoiseKind::DepolDephase:
            j["eps_d"] = m.eps_d;
            j["eps_z"] = m.eps_z;
            break;
        case NoiseKind::Composite:
            j["params"] = composite_to_json(m.composite);
            break;
    }
    if (m.product_form) {
        j["product_form"] = true;
        j["exact_product_rate"] = m.exact_product_rate;
    }
    return j;
}

NoiseModel noise_from_json(const json &j) {
    return guarded("noise model", [&] {
        NoiseModel m;
        m.kind = noise_kind_from_string(j.at("kind").get<std::string>());
        m.r = j.value("r", 1.0);
        switch (m.kind) {
            case NoiseKind::None:
                break;
            case NoiseKind::GateDepolarising:
            case NoiseKind::GateDependent:
            case NoiseKind::GlobalDepolarising:
                m.epsilon = j.at("epsilon").get<double>();
                break;
            case NoiseKind::DepolDephase:
                m.eps_d = j.at("eps_d").get<double>();
                m.eps_z = j.at("eps_z").get<double>();
                break;
            case NoiseKind::Composite:
                m.composite = composite_from_json(j.at("params"));
                break;
        }
        m.product_form = j.value("product_form", false);
        m.exact_product_rate = j.value("exact_product_rate", false);
        m.validate();
        return m;
    });
}

}  // namespace qem
