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

// Brute-force enumeration of every Clifford circuit on a tiny frame, using dense matrices.
#ifndef QEMICS_TESTS_ENUMERATION_H
#define QEMICS_TESTS_ENUMERATION_H

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "oracle.h"
#include "qemics/circuit.h"
#include "qemics/clifford.h"

namespace oracle {

// Circuits are grouped by (signed observable seen by the first layer, ideal value).
struct Enumeration {
    size_t total = 0;
    size_t error_sensitive = 0;
    double eta = 0;                      // |C^ES| / 24^N_R
    double nonuniform_mass = 0;          // sum over C^ES of 24^-N_R 3^w, should be 1
    std::map<std::string, double> p_nonuniform;
    std::map<std::string, double> p_uniform;
    std::map<std::vector<int>, double> pattern_uniform;  // pattern marginal under the uniform distribution
};

inline std::string signature(const qem::PauliString &pre_layer, int f) {
    return pre_layer.str() + (f > 0 ? "|+" : "|-");
}

inline Enumeration enumerate(const std::shared_ptr<const qem::CircuitFrame> &frame) {
    const size_t n = frame->num_qubits();
    const size_t len = frame->num_slots() - n;
    const size_t dim = size_t{1} << n;
    Enumeration out;
    std::vector<Mat> c1;
    for (int k = 0; k < qem::kC1Size; k++) c1.push_back(qem::c1_element(k).matrix);

    auto count = [](size_t base, size_t e) {
        size_t v = 1;
        for (size_t i = 0; i < e; i++) v *= base;
        return v;
    };
    const size_t patterns = count(24, len), layers = count(24, n);
    const double norm = std::pow(24.0, -static_cast<double>(frame->num_slots()));
    std::map<std::string, size_t> es_by_sig;
    std::map<std::vector<int>, size_t> es_by_pattern;
    const Mat q = to_matrix(frame->observable());
    for (size_t code = 0; code < patterns; code++) {
        std::vector<int> pattern(len);
        for (size_t i = 0, c = code; i < len; i++, c /= 24) pattern[i] = static_cast<int>(c % 24);
        // unitary of everything after the first layer
        Mat v = Mat::Identity(dim, dim);
        for (size_t e = n; e < frame->elements().size(); e++) {
            const auto &el = frame->elements()[e];
            Mat g = el.is_slot ? embed_single(c1[pattern[el.slot_index - n]], el.qubit, n)
                               : (el.gate.kind == qem::GateKind::CZ ? cz(el.gate.q0, el.gate.q1, n)
                                                                     : cnot(el.gate.q0, el.gate.q1, n));
            v = g * v;
        }
        const Mat pre = v.adjoint() * q * v;
        const qem::PauliString pre_pauli = decompose(pre, n);
        const size_t w = pre_pauli.weight();
        for (size_t lc = 0; lc < layers; lc++) {
            Mat u = Mat::Identity(dim, dim);
            for (size_t i = 0, c = lc; i < n; i++, c /= 24) u = embed_single(c1[c % 24], i, n) * u;
            const double f = (u.adjoint() * pre * u)(0, 0).real();
            out.total++;
            if (std::abs(std::abs(f) - 1) > 1e-9) continue;
            out.error_sensitive++;
            const std::string sig = signature(pre_pauli, f > 0 ? 1 : -1);
            const double p = norm * std::pow(3.0, static_cast<double>(w));
            out.p_nonuniform[sig] += p;
            out.nonuniform_mass += p;
            es_by_sig[sig]++;
            es_by_pattern[pattern]++;
        }
    }
    for (const auto &[sig, c] : es_by_sig) out.p_uniform[sig] = static_cast<double>(c) / out.error_sensitive;
    for (const auto &[pat, c] : es_by_pattern) out.pattern_uniform[pat] = static_cast<double>(c) / out.error_sensitive;
    out.eta = static_cast<double>(out.error_sensitive) / static_cast<double>(out.total);
    return out;
}

inline double total_variation(const std::map<std::string, double> &p, const std::map<std::string, double> &q) {
    std::map<std::string, double> diff = p;
    for (const auto &[k, v] : q) diff[k] -= v;
    double s = 0;
    for (const auto &[k, v] : diff) s += std::abs(v);
    return s / 2;
}

}  // namespace oracle

#endif
