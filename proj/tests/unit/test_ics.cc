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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "enumeration.h"
#include "helpers.h"
#include "oracle.h"
#include "qemics/ics.h"

namespace qem {
namespace {

using testing::make_frame;

std::shared_ptr<const CircuitFrame> two_qubit_frame() {
    return make_frame(2, {CliffordGate::cz(0, 1)}, "ZI");
}

SlotPattern pattern_of(const Circuit &c) {
    SlotPattern p;
    for (size_t i = c.num_qubits(); i < c.slots().size(); i++) p.push_back(c.slots()[i].clifford);
    return p;
}

std::map<std::string, double> signature_frequencies(const std::vector<EsSample> &samples) {
    std::map<std::string, double> freq;
    for (const EsSample &s : samples) {
        auto pre = pre_layer_observable(s.circuit.frame(), pattern_of(s.circuit));
        freq[oracle::signature(pre, s.f)] += 1.0 / static_cast<double>(samples.size());
    }
    return freq;
}

double dense_f(const Circuit &c) {
    oracle::Mat u = oracle::circuit_unitary(c);
    return (u.adjoint() * oracle::to_matrix(c.observable()) * u)(0, 0).real();
}

TEST(Ics, SingleQubitHasEightEquallyLikelyCircuits) {
    auto frame = testing::bare_frame("Z");
    auto e = oracle::enumerate(frame);
    EXPECT_EQ(e.total, 24u);
    EXPECT_EQ(e.error_sensitive, 8u);
    EXPECT_NEAR(e.nonuniform_mass, 1.0, 1e-12);

    Rng rng(3);
    const size_t count = 16000;
    auto samples = sample_nonuniform(frame, count, rng);
    std::map<int, size_t> hits;
    for (const auto &s : samples) {
        EXPECT_EQ(std::abs(s.f), 1);
        EXPECT_EQ(s.weight, 1u);
        EXPECT_DOUBLE_EQ(s.weight_factor, 1.0 / 3.0);
        hits[s.circuit.slots()[0].clifford]++;
    }
    ASSERT_EQ(hits.size(), 8u);
    const double mean = count / 8.0, sd = std::sqrt(count * (1.0 / 8) * (7.0 / 8));
    for (const auto &[k, h] : hits) EXPECT_NEAR(static_cast<double>(h), mean, 5 * sd) << k;
}

TEST(Ics, CountPerPattern) {
    EXPECT_DOUBLE_EQ(es_circuits_per_pattern(1, 1), 8);
    EXPECT_DOUBLE_EQ(es_circuits_per_pattern(3, 2), 8 * 8 * 24);
    EXPECT_DOUBLE_EQ(es_circuits_per_pattern(2, 0), 576);
}

TEST(Ics, BareFrameEtaIsThreeToMinusWeight) {
    for (const char *obs : {"Z", "XI", "XY", "ZZZ", "IIY"}) {
        auto frame = testing::bare_frame(obs);
        const double w = static_cast<double>(PauliString::from_str(obs).weight());
        EXPECT_NEAR(exact_eta(frame), std::pow(3.0, -w), 1e-12) << obs;
    }
}

TEST(Ics, ExactEtaMatchesBruteForce) {
    for (const char *obs : {"ZI", "XX", "IY"}) {
        auto frame = make_frame(2, {CliffordGate::cz(0, 1)}, obs);
        auto e = oracle::enumerate(frame);
        EXPECT_NEAR(exact_eta(frame), e.eta, 1e-12) << obs;
        EXPECT_NEAR(e.nonuniform_mass, 1.0, 1e-12) << obs;
    }
    auto frame = make_frame(2, {CliffordGate::cnot(1, 0)}, "XZ");
    EXPECT_NEAR(exact_eta(frame), oracle::enumerate(frame).eta, 1e-12);
}

TEST(Ics, ProposalRejectsBadResampleCount) {
    EXPECT_THROW(default_proposal(0, 3), std::invalid_argument);
    EXPECT_THROW(default_proposal(4, 3), std::invalid_argument);
    EXPECT_NO_THROW(default_proposal(3, 3));
}

TEST(Ics, SingleSlotProposalTouchesOneUniformSlot) {
    auto prop = default_proposal(1, 4);
    EXPECT_FALSE(prop.log_density);
    Rng rng(11);
    SlotPattern from{0, 5, 10, 15};
    std::vector<size_t> changed_at(4, 0);
    std::set<int> values;
    const size_t trials = 24000;
    for (size_t t = 0; t < trials; t++) {
        SlotPattern to = prop.draw(from, rng);
        size_t diffs = 0;
        for (size_t i = 0; i < 4; i++) {
            if (to[i] != from[i]) {
                diffs++;
                changed_at[i]++;
                values.insert(to[i]);
            }
        }
        EXPECT_LE(diffs, 1u);
    }
    EXPECT_EQ(values.size(), 24u);
    // each slot is picked with probability 1/4 and then changes with probability 23/24
    const double p = 0.25 * 23 / 24, mean = trials * p, sd = std::sqrt(trials * p * (1 - p));
    for (size_t c : changed_at) EXPECT_NEAR(static_cast<double>(c), mean, 5 * sd);
}

TEST(Ics, FullResampleIsIndependentOfStart) {
    // with m equal to the length the proposal is uniform, hence symmetric
    auto prop = default_proposal(2, 2);
    Rng rng(5);
    std::map<SlotPattern, size_t> hits;
    const size_t trials = 57600;
    for (size_t t = 0; t < trials; t++) hits[prop.draw({static_cast<int>(t % 24), 3}, rng)]++;
    EXPECT_EQ(hits.size(), 576u);
    for (const auto &[p, h] : hits) EXPECT_NEAR(static_cast<double>(h), 100.0, 60.0);
}

TEST(Ics, SamplesAreErrorSensitiveAndMatchDenseValue) {
    Rng rng(21);
    for (int rep = 0; rep < 6; rep++) {
        auto frame = testing::random_frame(3, 6, rng);
        auto samples = sample_nonuniform(frame, 60, rng);
        for (const auto &s : samples) {
            ASSERT_EQ(std::abs(s.f), 1);
            EXPECT_NEAR(dense_f(s.circuit), s.f, 1e-9);
            // the first layer never changes the weight
            EXPECT_EQ(s.weight, pre_layer_observable(*frame, pattern_of(s.circuit)).weight());
            EXPECT_DOUBLE_EQ(s.weight_factor, std::pow(3.0, -static_cast<double>(s.weight)));
        }
        auto chain = sample_uniform(frame, 60, default_proposal(2, frame->num_slots() - 3), std::nullopt, rng);
        for (const auto &s : chain.samples) {
            ASSERT_EQ(std::abs(s.f), 1);
            EXPECT_NEAR(dense_f(s.circuit), s.f, 1e-9);
            EXPECT_DOUBLE_EQ(s.weight_factor, 1.0);
        }
    }
}

TEST(Ics, NonuniformMatchesEnumeratedDistribution) {
    auto frame = two_qubit_frame();
    auto e = oracle::enumerate(frame);
    Rng rng(8);
    auto samples = sample_nonuniform(frame, 40000, rng);
    EXPECT_LT(oracle::total_variation(signature_frequencies(samples), e.p_nonuniform), 0.03);

    std::vector<double> ones(samples.size(), 1.0), wf;
    for (const auto &s : samples) wf.push_back(s.weight_factor);
    auto est = estimate_phenomenological(ones, wf);
    EXPECT_NEAR(est.eta, e.eta, 4 * est.se_eta);
}

TEST(Ics, ChainMatchesUniformDistribution) {
    auto frame = two_qubit_frame();
    auto e = oracle::enumerate(frame);
    Rng rng(9);
    auto chain = sample_uniform(frame, 40000, default_proposal(2, 2), std::nullopt, rng);
    EXPECT_EQ(chain.samples.size(), 40000u);
    EXPECT_EQ(chain.proposed, 40000u + 10 * frame->num_slots());
    EXPECT_GT(chain.accepted, 0u);
    EXPECT_LT(chain.accepted, chain.proposed);
    EXPECT_LT(oracle::total_variation(signature_frequencies(chain.samples), e.p_uniform), 0.04);
}

TEST(Ics, ChainPatternMarginalIsUniformOverCircuits) {
    // pattern frequency under a uniform law over circuits is proportional to 8^w 24^(n-w)
    auto frame = two_qubit_frame();
    auto e = oracle::enumerate(frame);
    Rng rng(10);
    auto chain = sample_uniform(frame, 60000, default_proposal(1, 2), std::nullopt, rng);
    std::map<std::vector<int>, double> freq;
    for (const auto &s : chain.samples) freq[pattern_of(s.circuit)] += 1.0 / chain.samples.size();
    double tv = 0;
    for (const auto &[p, v] : e.pattern_uniform) tv += std::abs(v - freq[p]);
    EXPECT_LT(tv / 2, 0.1);
}

TEST(Ics, ChainRejectsInvalidInput) {
    auto frame = two_qubit_frame();
    Rng rng(1);
    EXPECT_THROW(sample_uniform(frame, 0, default_proposal(1, 2), std::nullopt, rng), std::invalid_argument);
    EXPECT_THROW(sample_uniform(frame, 5, default_proposal(1, 2), SlotPattern{1}, rng), std::invalid_argument);
    EXPECT_THROW(sample_uniform(frame, 5, default_proposal(1, 2), SlotPattern{1, 24}, rng), std::invalid_argument);
    EXPECT_THROW(sample_nonuniform(frame, 0, rng), std::invalid_argument);
}

TEST(Ics, ChainBurnInIsConfigurable) {
    auto frame = two_qubit_frame();
    Rng rng(2);
    auto chain = sample_uniform(frame, 7, default_proposal(1, 2), SlotPattern{0, 0}, rng, 0);
    EXPECT_EQ(chain.proposed, 7u);
}

TEST(Ics, EstimatorOnConstantErrorGivesZeroSpread) {
    const double eps = 1e-3;
    const int gates = 40;
    const double eps0 = 1 - std::pow(1 - eps, gates);
    std::vector<double> yf(500, 1 - eps0), wf(500);
    for (size_t i = 0; i < wf.size(); i++) wf[i] = std::pow(3.0, -static_cast<double>(i % 4 + 1));
    for (const auto &est : {estimate_phenomenological(yf), estimate_phenomenological(yf, wf)}) {
        EXPECT_NEAR(est.epsilon0, eps0, 1e-12);
        EXPECT_NEAR(est.delta, 0.0, 1e-7);
        EXPECT_NEAR(est.se_epsilon0, 0.0, 1e-12);
    }
    EXPECT_TRUE(std::isnan(estimate_phenomenological(yf).eta));
}

TEST(Ics, EstimatorMatchesHandComputation) {
    // unweighted: epsilon = {0.1, 0.3}; mean 0.2, unbiased variance 0.02
    auto est = estimate_phenomenological({0.9, 0.7});
    EXPECT_NEAR(est.epsilon0, 0.2, 1e-12);
    EXPECT_NEAR(est.delta, std::sqrt(0.02), 1e-12);
    // weights {1, 3}: mean 0.25; biased variance 0.0075, effective-size factor 1 - 10/16
    auto w = estimate_phenomenological({0.9, 0.7}, {1, 3});
    EXPECT_NEAR(w.epsilon0, 0.25, 1e-12);
    EXPECT_NEAR(w.delta, std::sqrt(0.0075 / (1 - 10.0 / 16)), 1e-12);
    EXPECT_NEAR(w.eta, 2.0, 1e-12);
    EXPECT_THROW(estimate_phenomenological({0.5}), std::invalid_argument);
    EXPECT_THROW(estimate_phenomenological({0.5, 0.4}, {1}), std::invalid_argument);
}

TEST(Ics, MeanSquaredError) {
    EXPECT_DOUBLE_EQ(mse({1, -1}, {1, -1}), 0.0);
    EXPECT_NEAR(mse({1, -1, 1}, {0.9, -0.9, 0.9}), 0.01, 1e-15);
    EXPECT_NEAR(mse({1, 1}, {0.0, 0.5}, {1, 3}), (1 + 3 * 0.25) / 4, 1e-15);
    EXPECT_THROW(mse({}, {}), std::invalid_argument);
    EXPECT_THROW(mse({1}, {1, 2}), std::invalid_argument);
}

TEST(Ics, ReweightedLossEqualsUniformLoss) {
    // reweighting non-uniform draws by 3^-w recovers the plain average over C^ES
    auto frame = two_qubit_frame();
    auto e = oracle::enumerate(frame);
    auto loss = [](const std::string &sig) { return sig[0] == 'Z' ? 1.0 : 0.25; };
    double exact = 0;
    for (const auto &[sig, p] : e.p_uniform) exact += p * loss(sig);
    Rng rng(4);
    auto samples = sample_nonuniform(frame, 30000, rng);
    double num = 0, den = 0;
    for (const auto &s : samples) {
        auto sig = oracle::signature(pre_layer_observable(*frame, pattern_of(s.circuit)), s.f);
        num += s.weight_factor * loss(sig);
        den += s.weight_factor;
    }
    EXPECT_NEAR(num / den, exact, 0.02);
}

}  // namespace
}  // namespace qem
