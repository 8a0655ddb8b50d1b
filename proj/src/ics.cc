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

#include "qemics/ics.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qemics/stabilizer.h"

namespace qem {

namespace {

void check_pattern(const CircuitFrame &frame, const SlotPattern &pattern) {
    if (pattern.size() + frame.num_qubits() != frame.num_slots()) {
        throw std::invalid_argument("pattern length must equal the number of slots after the first layer");
    }
    for (int k : pattern) {
        if (k < 0 || k >= kC1Size) {
            throw std::invalid_argument("pattern entry is not a C1 index");
        }
    }
}

EsSample make_sample(Circuit circuit, double weight_factor) {
    PauliString eff = effective_observable(circuit);
    EsSample s{std::move(circuit), eff.weight(), expectation_on_zero_state(eff), weight_factor};
    return s;
}

}  // namespace

SlotPattern random_pattern(const CircuitFrame &frame, Rng &rng) {
    SlotPattern p(frame.num_slots() - frame.num_qubits());
    for (int &k : p) {
        k = static_cast<int>(uniform_index(rng, kC1Size));
    }
    return p;
}

PauliString pre_layer_observable(const CircuitFrame &frame, const SlotPattern &pattern) {
    check_pattern(frame, pattern);
    const size_t n = frame.num_qubits();
    PauliString q = frame.observable();
    const auto &elements = frame.elements();
    for (size_t i = elements.size(); i-- > n;) {
        const FrameElement &e = elements[i];
        if (e.is_slot) {
            conjugate_c1_in_place(pattern[e.slot_index - n], e.qubit, true, q);
        } else {
            conjugate_adjoint_in_place(e.gate, q);
        }
    }
    return q;
}

Circuit es_circuit(const std::shared_ptr<const CircuitFrame> &frame, const SlotPattern &pattern, Rng &rng) {
    const PauliString q = pre_layer_observable(*frame, pattern);
    const size_t n = frame->num_qubits();
    std::vector<SlotGate> slots;
    slots.reserve(frame->num_slots());
    for (size_t i = 0; i < n; i++) {
        const auto &valid = cliffords_mapping_to_z(q.get(i));
        slots.push_back(SlotGate::from_clifford(valid[uniform_index(rng, valid.size())]));
    }
    for (int k : pattern) {
        slots.push_back(SlotGate::from_clifford(k));
    }
    return Circuit(frame, std::move(slots));
}

double es_circuits_per_pattern(size_t n, size_t w) {
    return std::pow(8.0, static_cast<double>(w)) * std::pow(24.0, static_cast<double>(n - w));
}

std::vector<EsSample> sample_nonuniform(const std::shared_ptr<const CircuitFrame> &frame, size_t count, Rng &rng) {
    if (count < 1) {
        throw std::invalid_argument("sample count must be positive");
    }
    std::vector<EsSample> out;
    out.reserve(count);
    for (size_t t = 0; t < count; t++) {
        Circuit c = es_circuit(frame, random_pattern(*frame, rng), rng);
        EsSample s = make_sample(std::move(c), 0);
        s.weight_factor = std::pow(3.0, -static_cast<double>(s.weight));
        out.push_back(std::move(s));
    }
    return out;
}

Proposal default_proposal(size_t m, size_t pattern_length) {
    if (m < 1 || m > pattern_length) {
        throw std::invalid_argument("resample count must lie in [1, pattern length]");
    }
    Proposal p;
    p.draw = [m, pattern_length](const SlotPattern &from, Rng &rng) {
        SlotPattern to = from;
        // Partial Fisher-Yates: the first m entries of idx are a uniform m-subset.
        std::vector<size_t> idx(pattern_length);
        std::iota(idx.begin(), idx.end(), 0);
        for (size_t k = 0; k < m; k++) {
            std::swap(idx[k], idx[k + uniform_index(rng, pattern_length - k)]);
            to[idx[k]] = static_cast<int>(uniform_index(rng, kC1Size));
        }
        return to;
    };
    return p;
}

ChainResult sample_uniform(const std::shared_ptr<const CircuitFrame> &frame, size_t count, const Proposal &proposal,
                           const std::optional<SlotPattern> &initial, Rng &rng, std::optional<size_t> burn_in) {
    if (count < 1) {
        throw std::invalid_argument("sample count must be positive");
    }
    SlotPattern pattern = initial ? *initial : random_pattern(*frame, rng);
    check_pattern(*frame, pattern);
    const size_t burn = burn_in.value_or(10 * frame->num_slots());

    EsSample current = make_sample(es_circuit(frame, pattern, rng), 1.0);
    ChainResult result;
    result.samples.reserve(count);
    for (size_t t = 0; t < burn + count; t++) {
        SlotPattern next = proposal.draw(pattern, rng);
        Circuit candidate = es_circuit(frame, next, rng);
        size_t w = circuit_weight(candidate);
        double log_a = (static_cast<double>(current.weight) - static_cast<double>(w)) * std::log(3.0);
        if (proposal.log_density) {
            log_a += proposal.log_density(pattern, next) - proposal.log_density(next, pattern);
        }
        result.proposed++;
        if (log_a >= 0 || uniform01(rng) < std::exp(log_a)) {
            result.accepted++;
            pattern = std::move(next);
            current = make_sample(std::move(candidate), 1.0);
        }
        if (t >= burn) {
            result.samples.push_back(current);
        }
    }
    return result;
}

PhenomenologicalEstimate estimate_phenomenological(const std::vector<double> &yf,
                                                   const std::vector<double> &weight_factors) {
    const size_t m = yf.size();
    if (m < 2) {
        throw std::invalid_argument("at least two samples are needed");
    }
    const bool weighted = !weight_factors.empty();
    if (weighted && weight_factors.size() != m) {
        throw std::invalid_argument("weights and values differ in length");
    }
    auto w = [&](size_t i) { return weighted ? weight_factors[i] : 1.0; };

    double sw = 0, sw2 = 0;
    for (size_t i = 0; i < m; i++) {
        sw += w(i);
        sw2 += w(i) * w(i);
    }
    PhenomenologicalEstimate est;
    est.sample_count = m;
    for (size_t i = 0; i < m; i++) {
        est.epsilon0 += w(i) * (1.0 - yf[i]);
    }
    est.epsilon0 /= sw;

    double var = 0;
    for (size_t i = 0; i < m; i++) {
        double d = 1.0 - yf[i] - est.epsilon0;
        var += w(i) * d * d;
    }
    var /= sw;
    // Effective-sample-size correction; reduces to the n - 1 estimator for equal weights.
    const double norm = 1.0 - sw2 / (sw * sw);
    var = norm > 0 ? var / norm : 0.0;
    if (var < 0) {
        var = 0;
        est.delta_clamped = true;
    }
    est.delta = std::sqrt(var);

    double v_eps = 0, v_var = 0;
    for (size_t i = 0; i < m; i++) {
        double d = 1.0 - yf[i] - est.epsilon0;
        v_eps += w(i) * w(i) * d * d;
        v_var += w(i) * w(i) * (d * d - var) * (d * d - var);
    }
    est.se_epsilon0 = std::sqrt(v_eps) / sw;
    const double se_var = std::sqrt(v_var) / sw;
    est.se_delta = est.delta > 0 ? se_var / (2 * est.delta) : std::sqrt(se_var);

    if (weighted) {
        est.eta = sw / static_cast<double>(m);
        double s = 0;
        for (size_t i = 0; i < m; i++) s += (w(i) - est.eta) * (w(i) - est.eta);
        est.se_eta = std::sqrt(s / static_cast<double>(m - 1) / static_cast<double>(m));
    } else {
        est.eta = std::nan("");
        est.se_eta = std::nan("");
    }
    return est;
}

double mse(const std::vector<double> &f, const std::vector<double> &y, const std::vector<double> &weights) {
    if (f.empty() || f.size() != y.size() || (!weights.empty() && weights.size() != f.size())) {
        throw std::invalid_argument("mse needs equal-length, nonempty inputs");
    }
    double num = 0, den = 0;
    for (size_t i = 0; i < f.size(); i++) {
        double w = weights.empty() ? 1.0 : weights[i];
        num += w * (y[i] - f[i]) * (y[i] - f[i]);
        den += w;
    }
    return num / den;
}

double exact_eta(const std::shared_ptr<const CircuitFrame> &frame) {
    const size_t len = frame->num_slots() - frame->num_qubits();
    if (std::pow(24.0, static_cast<double>(len)) > 2e7) {
        throw std::invalid_argument("frame too large to enumerate");
    }
    SlotPattern p(len, 0);
    double sum = 0;
    size_t total = 0;
    while (true) {
        sum += std::pow(3.0, -static_cast<double>(pre_layer_observable(*frame, p).weight()));
        total++;
        size_t k = 0;
        while (k < len && ++p[k] == kC1Size) {
            p[k++] = 0;
        }
        if (k == len) break;
    }
    return sum / static_cast<double>(total);
}

}  // namespace qem
