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

#ifndef QEMICS_ICS_H
#define QEMICS_ICS_H

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "qemics/circuit.h"
#include "qemics/rng.h"

namespace qem {

/// C1 indices of every slot after the first layer, in slot order.
using SlotPattern = std::vector<int>;

SlotPattern random_pattern(const CircuitFrame &frame, Rng &rng);

/// Observable conjugated back through the circuit with an identity first layer.
PauliString pre_layer_observable(const CircuitFrame &frame, const SlotPattern &pattern);

/// Error-sensitive circuit: the pattern fills the later slots and each first-layer gate is
/// drawn uniformly from the C1 elements that map its factor of the pre-layer observable to +-Z
/// (any element for an identity factor).
Circuit es_circuit(const std::shared_ptr<const CircuitFrame> &frame, const SlotPattern &pattern, Rng &rng);

/// Number of error-sensitive circuits sharing one pattern of weight w on n qubits: 8^w 24^(n-w).
double es_circuits_per_pattern(size_t n, size_t w);

struct EsSample {
    Circuit circuit;
    size_t weight = 0;
    int f = 0;
    /// 3^-w for non-uniform draws, 1 for chain samples.
    double weight_factor = 1;
};

/// Independent draws with probability 24^-N_R 3^w(C).
std::vector<EsSample> sample_nonuniform(const std::shared_ptr<const CircuitFrame> &frame, size_t count, Rng &rng);

/// Proposal g(to | from) over patterns. `log_density` may be empty for symmetric proposals.
struct Proposal {
    std::function<SlotPattern(const SlotPattern &, Rng &)> draw;
    std::function<double(const SlotPattern &to, const SlotPattern &from)> log_density;
};

/// Resamples m distinct, uniformly chosen slots of the pattern from C1. Symmetric.
Proposal default_proposal(size_t m, size_t pattern_length);

struct ChainResult {
    std::vector<EsSample> samples;
    size_t proposed = 0;
    size_t accepted = 0;
};

/// Metropolis-Hastings chain with uniform stationary distribution over error-sensitive
/// circuits. Rejected steps repeat the previous circuit. `burn_in` steps are discarded;
/// the default is ten times the slot count.
ChainResult sample_uniform(const std::shared_ptr<const CircuitFrame> &frame, size_t count, const Proposal &proposal,
                           const std::optional<SlotPattern> &initial, Rng &rng,
                           std::optional<size_t> burn_in = std::nullopt);

struct PhenomenologicalEstimate {
    double epsilon0 = 0;
    double delta = 0;
    /// Fraction of error-sensitive circuits; NaN when the samples carry no importance weights.
    double eta = 0;
    size_t sample_count = 0;
    double se_epsilon0 = 0;
    double se_delta = 0;
    double se_eta = 0;
    /// The bias-corrected variance came out negative and was clamped to zero.
    bool delta_clamped = false;
};

/// epsilon_C = 1 - y f for each error-sensitive sample. With weight factors (3^-w), the mean
/// and variance are self-normalised importance estimates and eta is their mean; without,
/// the plain mean and unbiased variance are used. Throws with fewer than two samples.
PhenomenologicalEstimate estimate_phenomenological(const std::vector<double> &yf,
                                                   const std::vector<double> &weight_factors = {});

/// Mean of (y - f)^2, self-normalised by `weights` when given.
double mse(const std::vector<double> &f, const std::vector<double> &y, const std::vector<double> &weights = {});

/// Exact mean of 3^-w over all patterns of a small frame; equals |C^ES| / 24^N_R.
double exact_eta(const std::shared_ptr<const CircuitFrame> &frame);

}  // namespace qem

#endif
