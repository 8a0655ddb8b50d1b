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

#include "qemics/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qemics/circuit_io.h"
#include "qemics/density.h"
#include "qemics/mitigation.h"
#include "qemics/stabilizer.h"

namespace qem {

using nlohmann::json;

namespace {

constexpr const char *kExperimentNames[] = {"epsilon_histogram",  "scaling_sweep", "gate_dependent_sweep",
                                            "formula_comparison", "error_propagation", "feasibility",
                                            "fc_dependence"};

// Stream tags keep the random draws of different phases independent.
enum Stream : uint64_t {
    kFrame = 1,
    kRate,
    kTrain,
    kTest,
    kChain,
    kTestSecond,
};

uint64_t point_stream(Stream tag, size_t point) { return splitmix64(tag) ^ (point * 0x9E3779B97F4A7C15ULL); }

Rng stream_rng(const ExperimentConfig &cfg, Stream tag, size_t point, size_t index = 0) {
    return make_rng(cfg.seed, point_stream(tag, point), index);
}

struct GridPoint {
    size_t index;
    size_t n;
    size_t gates;
    size_t replicate;
};

std::vector<GridPoint> grid(const ExperimentConfig &cfg) {
    std::vector<GridPoint> g;
    for (size_t n : cfg.qubits)
        for (size_t N : cfg.gates)
            for (size_t r = 0; r < cfg.replicates; r++) g.push_back({g.size(), n, N, r});
    return g;
}

std::shared_ptr<const CircuitFrame> point_frame(const ExperimentConfig &cfg, const GridPoint &p) {
    FrameFamily fam;
    fam.kind = cfg.kind;
    fam.num_qubits = p.n;
    fam.two_qubit_count = p.gates;
    fam.gate = cfg.gate;
    fam.periodic_wrap = cfg.periodic_wrap;
    fam.seed = derive_seed(cfg.seed, point_stream(kFrame, p.index));
    return build_frame(fam);
}

struct ResolvedNoise {
    NoiseModel model;
    double epsilon = 0;
    double log10_total = std::nan("");
};

ResolvedNoise resolve_noise(const ExperimentConfig &cfg, const GridPoint &p) {
    ResolvedNoise out{cfg.noise.model};
    Rng rng = stream_rng(cfg, kRate, p.index);
    if (cfg.noise.sampled_rate) {
        TotalErrorRate t = sample_total_error_rate(p.gates, rng);
        out.epsilon = t.epsilon;
        out.log10_total = t.log10_total;
        if (out.model.kind == NoiseKind::Composite) {
            out.model.composite = sample_composite_params(t.epsilon, rng);
        } else {
            out.model.epsilon = t.epsilon;
        }
    } else if (cfg.noise.composite_budget) {
        out.epsilon = *cfg.noise.composite_budget;
        out.model.composite = sample_composite_params(out.epsilon, rng);
    } else {
        out.epsilon = out.model.kind == NoiseKind::DepolDephase ? out.model.eps_d + out.model.eps_z : out.model.epsilon;
    }
    out.model.validate();
    return out;
}

// Grid points beyond the density-matrix cap are skipped, not fatal.
bool density_fits(const GridPoint &p, ExperimentResult &result) {
    if (p.n <= kMaxDensityQubits) return true;
    result.warnings.push_back("skipped grid point with " + std::to_string(p.n) + " qubits (density-matrix limit is " +
                              std::to_string(kMaxDensityQubits) + ")");
    return false;
}

// Error-sensitive training samples with their weights.
struct EsSet {
    std::vector<EsSample> samples;
    std::vector<double> weights;
    double acceptance = std::nan("");
};

EsSet draw_es(const ExperimentConfig &cfg, const std::shared_ptr<const CircuitFrame> &frame, size_t point,
              const std::string &algorithm, size_t workers) {
    EsSet set;
    if (algorithm == "uniform") {
        Rng rng = stream_rng(cfg, kChain, point);
        const size_t len = frame->num_slots() - frame->num_qubits();
        // one setting serves every grid point, so it is capped at each frame's length
        const size_t m = cfg.options.value("proposal_m", std::max<size_t>(1, len / 4));
        if (m == 0) throw ConfigError("proposal_m must be positive");
        ChainResult chain = sample_uniform(frame, cfg.n_train, default_proposal(std::min(m, len), len), std::nullopt, rng);
        set.samples = std::move(chain.samples);
        set.weights.assign(set.samples.size(), 1.0);
        set.acceptance = static_cast<double>(chain.accepted) / static_cast<double>(chain.proposed);
        return set;
    }
    set.samples = parallel_map<EsSample>(cfg.n_train, workers, [&](size_t i) {
        Rng rng = stream_rng(cfg, kTrain, point, i);
        Circuit c = es_circuit(frame, random_pattern(*frame, rng), rng);
        PauliString eff = effective_observable(c);
        double w = std::pow(3.0, -static_cast<double>(eff.weight()));
        return EsSample{std::move(c), eff.weight(), expectation_on_zero_state(eff), w};
    });
    for (const EsSample &s : set.samples) set.weights.push_back(s.weight_factor);
    return set;
}

std::vector<double> es_values(const EsSet &set, const NoiseModel &noise, size_t workers) {
    return parallel_map<double>(set.samples.size(), workers, [&](size_t i) {
        return noisy_expectation(set.samples[i].circuit, noise) * set.samples[i].f;
    });
}

PhenomenologicalEstimate estimate(const EsSet &set, const std::vector<double> &yf, const std::string &algorithm) {
    return estimate_phenomenological(yf, algorithm == "uniform" ? std::vector<double>{} : set.weights);
}

// Random unitary circuits with ideal and noisy values.
struct UnitarySet {
    std::vector<Circuit> circuits;
    std::vector<double> f;
};

UnitarySet draw_unitary(const ExperimentConfig &cfg, const std::shared_ptr<const CircuitFrame> &frame, size_t point,
                        size_t count, size_t workers) {
    UnitarySet set;
    set.circuits = parallel_map<Circuit>(count, workers, [&](size_t i) {
        Rng rng = stream_rng(cfg, kTest, point, i);
        return bind_random_unitary(frame, rng);
    });
    set.f = parallel_map<double>(count, workers, [&](size_t i) { return statevector_expectation(set.circuits[i]); });
    return set;
}

double mean_of(const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

// sqrt of mean((y - f)^2) and its delta-method standard error.
std::pair<double, double> rmse_with_se(const std::vector<double> &y, const std::vector<double> &f) {
    const size_t m = y.size();
    std::vector<double> sq(m);
    for (size_t i = 0; i < m; i++) sq[i] = (y[i] - f[i]) * (y[i] - f[i]);
    const double l = mean_of(sq);
    double var = 0;
    for (double s : sq) var += (s - l) * (s - l);
    var /= std::max<size_t>(1, m - 1);
    const double se_l = std::sqrt(var / m);
    const double r = std::sqrt(l);
    return {r, r > 0 ? se_l / (2 * r) : 0.0};
}

Table make_table(std::string name, std::vector<std::string> columns) { return Table{std::move(name), std::move(columns), {}}; }

int64_t as_int(size_t v) { return static_cast<int64_t>(v); }

// Fits value vs N over rows grouped by `group` (empty = all rows), skipping nonpositive values.
void add_fits(Table &fits, const Table &data, const std::string &quantity, const std::string &group,
              const std::function<double(size_t)> &value) {
    std::vector<std::string> keys;
    for (size_t r = 0; r < data.rows.size(); r++) {
        std::string k = group.empty() ? "" : format_cell(data.rows[r][data.column(group)]);
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
    for (const std::string &k : keys) {
        std::vector<std::pair<double, double>> pts;
        for (size_t r = 0; r < data.rows.size(); r++) {
            if (!group.empty() && format_cell(data.rows[r][data.column(group)]) != k) continue;
            double v = value(r);
            if (v > 0 && std::isfinite(v)) pts.emplace_back(data.number(r, "N"), v);
        }
        std::vector<double> xs;
        for (auto &p : pts) xs.push_back(p.first);
        std::sort(xs.begin(), xs.end());
        if (pts.size() < 3 || xs.front() == xs.back()) continue;
        ScalingFit fit = fit_power_law(pts);
        fits.rows.push_back({k.empty() ? Cell{std::string("all")} : Cell{k}, quantity, fit.exponent, fit.se_exponent,
                             fit.prefactor, fit.r_squared, as_int(pts.size())});
    }
}

Table fits_table() {
    return make_table("fits", {"group", "quantity", "exponent", "se_exponent", "prefactor", "r_squared", "points"});
}

// ---------------------------------------------------------------------------------------------

ExperimentResult run_epsilon_histogram(const ExperimentConfig &cfg, size_t workers) {
    const std::string mode = cfg.options.value("weighting", "rejection");
    const size_t bins = cfg.options.value("bins", 50);
    if (mode != "rejection" && mode != "reweighted") throw ConfigError("weighting must be rejection or reweighted");
    if (bins < 1) throw ConfigError("bins must be positive");
    Table summary = make_table("summary", {"n", "N", "replicate", "epsilon", "samples", "attempts", "epsilon0",
                                           "se_epsilon0", "delta", "se_delta"});
    Table samples = make_table("samples", {"n", "N", "replicate", "index", "f", "y", "epsilon_c", "weight"});
    Table hist = make_table("histogram", {"n", "N", "replicate", "bin_lo", "bin_hi", "weight"});
    ExperimentResult result;
    for (const GridPoint &p : grid(cfg)) {
        if (!density_fits(p, result)) continue;
        auto frame = point_frame(cfg, p);
        ResolvedNoise noise = resolve_noise(cfg, p);
        std::vector<size_t> chosen;
        std::vector<double> f, w;
        size_t attempts = 0;
        if (mode == "rejection") {
            // Screening is cheap (statevector); only accepted circuits are evolved.
            const size_t cap = 100000 * std::max<size_t>(1, cfg.n_test);
            while (chosen.size() < cfg.n_test) {
                if (attempts >= cap) throw NumericalError("f^2 rejection accepted too few circuits");
                Rng rng = stream_rng(cfg, kTest, p.index, attempts);
                Circuit c = bind_random_unitary(frame, rng);
                double fc = statevector_expectation(c);
                if (uniform01(rng) < fc * fc) {
                    chosen.push_back(attempts);
                    f.push_back(fc);
                    w.push_back(1.0);
                }
                attempts++;
            }
        } else {
            for (size_t i = 0; i < cfg.n_test; i++) {
                Rng rng = stream_rng(cfg, kTest, p.index, i);
                double fc = statevector_expectation(bind_random_unitary(frame, rng));
                if (fc != 0) {
                    chosen.push_back(i);
                    f.push_back(fc);
                    w.push_back(fc * fc);
                }
            }
            attempts = cfg.n_test;
        }
        std::vector<double> y = parallel_map<double>(chosen.size(), workers, [&](size_t k) {
            Rng rng = stream_rng(cfg, kTest, p.index, chosen[k]);
            Circuit c = bind_random_unitary(frame, rng);
            return expectation(run(c, noise.model), c.observable());
        });
        std::vector<double> ratio(y.size()), eps(y.size());
        for (size_t k = 0; k < y.size(); k++) {
            ratio[k] = y[k] / f[k];
            eps[k] = 1 - ratio[k];
            samples.rows.push_back({as_int(p.n), as_int(p.gates), as_int(p.replicate), as_int(chosen[k]), f[k], y[k],
                                    eps[k], w[k]});
        }
        PhenomenologicalEstimate est = estimate_phenomenological(ratio, mode == "rejection" ? std::vector<double>{} : w);
        if (est.delta_clamped) result.warnings.push_back("variance clamped to zero");
        summary.rows.push_back({as_int(p.n), as_int(p.gates), as_int(p.replicate), noise.epsilon, as_int(y.size()),
                                as_int(attempts), est.epsilon0, est.se_epsilon0, est.delta, est.se_delta});
        const auto [lo_it, hi_it] = std::minmax_element(eps.begin(), eps.end());
        const double lo = *lo_it, hi = *hi_it > *lo_it ? *hi_it : *lo_it + 1e-12;
        std::vector<double> counts(bins, 0.0);
        for (size_t k = 0; k < eps.size(); k++) {
            size_t b = std::min(bins - 1, static_cast<size_t>((eps[k] - lo) / (hi - lo) * bins));
            counts[b] += w[k];
        }
        for (size_t b = 0; b < bins; b++) {
            hist.rows.push_back({as_int(p.n), as_int(p.gates), as_int(p.replicate), lo + (hi - lo) * b / bins,
                                 lo + (hi - lo) * (b + 1) / bins, counts[b]});
        }
    }
    Table fits = fits_table();
    add_fits(fits, summary, "epsilon0", "n", [&](size_t r) { return summary.number(r, "epsilon0"); });
    add_fits(fits, summary, "delta", "n", [&](size_t r) { return summary.number(r, "delta"); });
    result.tables = {summary, hist, samples, fits};
    return result;
}

ExperimentResult run_scaling_sweep(const ExperimentConfig &cfg, size_t workers) {
    const std::string algorithm = cfg.options.value("training", "nonuniform");
    const bool optimal = cfg.options.value("formula", "pemi_optimal") == "pemi_optimal";
    Table t = make_table("scaling", {"n", "N", "replicate", "epsilon", "log10_total", "epsilon0", "se_epsilon0", "delta",
                                     "se_delta", "eta", "sqrt_L", "se_sqrt_L", "sqrt_Lp", "se_sqrt_Lp", "ratio",
                                     "sqrt_L_per_epsilon"});
    ExperimentResult result;
    for (const GridPoint &p : grid(cfg)) {
        if (!density_fits(p, result)) continue;
        auto frame = point_frame(cfg, p);
        ResolvedNoise noise = resolve_noise(cfg, p);
        EsSet train = draw_es(cfg, frame, p.index, algorithm, workers);
        PhenomenologicalEstimate est = estimate(train, es_values(train, noise.model, workers), algorithm);
        if (!(est.epsilon0 < 1)) throw NumericalError("average depolarising rate >= 1");
        const double factor = pemi_factor(est.epsilon0, est.delta, optimal);
        UnitarySet test = draw_unitary(cfg, frame, p.index, cfg.n_test, workers);
        std::vector<double> y = parallel_map<double>(cfg.n_test, workers, [&](size_t i) {
            return expectation(run(test.circuits[i], noise.model), test.circuits[i].observable());
        });
        std::vector<double> ym(y.size());
        for (size_t i = 0; i < y.size(); i++) ym[i] = factor * y[i];
        auto [rl, se_rl] = rmse_with_se(y, test.f);
        auto [rlp, se_rlp] = rmse_with_se(ym, test.f);
        t.rows.push_back({as_int(p.n), as_int(p.gates), as_int(p.replicate), noise.epsilon, noise.log10_total,
                          est.epsilon0, est.se_epsilon0, est.delta, est.se_delta, est.eta, rl, se_rl, rlp, se_rlp,
                          rlp > 0 ? rl / rlp : std::nan(""), noise.epsilon > 0 ? rl / noise.epsilon : std::nan("")});
    }
    Table fits = fits_table();
    add_fits(fits, t, "ratio", "n", [&](size_t r) { return t.number(r, "ratio"); });
    add_fits(fits, t, "sqrt_L_per_epsilon", "n", [&](size_t r) { return t.number(r, "sqrt_L_per_epsilon"); });
    result.tables = {t, fits};
    return result;
}

ExperimentResult run_gate_dependent_sweep(const ExperimentConfig &cfg, size_t workers) {
    const std::string algorithm = cfg.options.value("training", "nonuniform");
    Table t = make_table("gate_dependent", {"n", "N", "replicate", "epsilon", "epsilon0", "se_epsilon0", "delta",
                                            "se_delta", "eta", "se_eta", "delta_over_epsilon0"});
    for (const GridPoint &p : grid(cfg)) {
        auto frame = point_frame(cfg, p);
        ResolvedNoise noise = resolve_noise(cfg, p);
        EsSet train = draw_es(cfg, frame, p.index, algorithm, workers);
        PhenomenologicalEstimate est = estimate(train, es_values(train, noise.model, workers), algorithm);
        t.rows.push_back({as_int(p.n), as_int(p.gates), as_int(p.replicate), noise.epsilon, est.epsilon0,
                          est.se_epsilon0, est.delta, est.se_delta, est.eta, est.se_eta,
                          est.epsilon0 > 0 ? est.delta / est.epsilon0 : std::nan("")});
    }
    Table fits = fits_table();
    add_fits(fits, t, "epsilon0", "n", [&](size_t r) { return t.number(r, "epsilon0"); });
    add_fits(fits, t, "delta", "n", [&](size_t r) { return t.number(r, "delta"); });
    return {{t, fits}, {}};
}

ExperimentResult run_formula_comparison(const ExperimentConfig &cfg, size_t workers) {
    const NoiseModel &base = cfg.noise.model;
    if (base.kind != NoiseKind::DepolDephase) {
        throw ConfigError("formula_comparison needs a depol_dephase noise model");
    }
    const double eps_d = base.eps_d * base.r, eps_z = base.eps_z * base.r;
    const double eps_d2 = cfg.options.value("amplified_eps_d", 2 * (eps_d + eps_z) - eps_z);
    const double lo = cfg.options.value("pec_lambda_min", -0.2), hi = cfg.options.value("pec_lambda_max", 0.0);
    const NoiseModel m1 = NoiseModel::depol_dephase(eps_d, eps_z);
    const NoiseModel m2 = NoiseModel::depol_dephase(eps_d2, eps_z);
    const double lambda0 = pec_exact_lambda(eps_d);
    const double lambda_methods = lambda0 - 2 * eps_z;

    Table t = make_table("formulas", {"n", "N", "replicate", "formula", "parameter", "rmse", "se_rmse"});
    Table train_t = make_table("training", {"n", "N", "replicate", "epsilon1", "epsilon2", "delta1", "delta2",
                                            "lambda_ee", "lambda_pec", "epsilon0_vd", "eta"});
    ExperimentResult result;
    for (const GridPoint &p : grid(cfg)) {
        if (!density_fits(p, result)) continue;
        auto frame = point_frame(cfg, p);
        EsSet train = draw_es(cfg, frame, p.index, "nonuniform", workers);
        std::vector<double> yf1 = es_values(train, m1, workers), yf2 = es_values(train, m2, workers);
        PhenomenologicalEstimate e1 = estimate(train, yf1, "nonuniform"), e2 = estimate(train, yf2, "nonuniform");
        const double lambda_ee = optimal_lambda_from_rates(e1.epsilon0, e2.epsilon0);
        auto pec_loss = [&](double lambda) {
            const Channel inv = depolarising_inverse_map(lambda);
            std::vector<double> yf = parallel_map<double>(train.samples.size(), workers, [&](size_t i) {
                return pauli_noise_expectation(train.samples[i].circuit, m1, inv) * train.samples[i].f;
            });
            std::vector<double> ones(yf.size(), 1.0);
            return mse(ones, yf, train.weights);
        };
        const double lambda_opt = golden_section_minimize(pec_loss, lo, hi, 1e-6);
        std::vector<double> vd_train = parallel_map<double>(train.samples.size(), workers, [&](size_t i) {
            const Circuit &c = train.samples[i].circuit;
            auto [num, den] = purity_pair(run(c, m1), c.observable());
            return virtual_distillation_ratio(num, den) * train.samples[i].f;
        });
        double sw = 0, s = 0;
        for (size_t i = 0; i < vd_train.size(); i++) {
            sw += train.weights[i];
            s += train.weights[i] * vd_train[i];
        }
        const double eps_vd = 1 - s / sw;
        train_t.rows.push_back({as_int(p.n), as_int(p.gates), as_int(p.replicate), e1.epsilon0, e2.epsilon0, e1.delta,
                                e2.delta, lambda_ee, lambda_opt, eps_vd, e1.eta});

        UnitarySet test = draw_unitary(cfg, frame, p.index, cfg.n_test, workers);
        struct Values {
            double y1, y2, vd, pec0, pec_opt, pec_methods;
        };
        std::vector<Values> vals = parallel_map<Values>(cfg.n_test, workers, [&](size_t i) {
            const Circuit &c = test.circuits[i];
            const PauliString &q = c.observable();
            DensityState rho = run(c, m1);
            auto [num, den] = purity_pair(rho, q);
            return Values{expectation(rho, q),
                          expectation(run(c, m2), q),
                          virtual_distillation_ratio(num, den),
                          expectation(run(c, m1, depolarising_inverse_map(lambda0)), q),
                          expectation(run(c, m1, depolarising_inverse_map(lambda_opt)), q),
                          expectation(run(c, m1, depolarising_inverse_map(lambda_methods)), q)};
        });
        auto emit = [&](const std::string &name, double param, const std::function<double(const Values &)> &g) {
            std::vector<double> y;
            for (const Values &v : vals) y.push_back(g(v));
            auto [r, se] = rmse_with_se(y, test.f);
            t.rows.push_back({as_int(p.n), as_int(p.gates), as_int(p.replicate), name, param, r, se});
        };
        const double pemi_b = pemi_factor(e1.epsilon0, e1.delta, false);
        const double pemi_o = pemi_factor(e1.epsilon0, e1.delta, true);
        emit("raw", std::nan(""), [](const Values &v) { return v.y1; });
        emit("pemi_basic", e1.epsilon0, [&](const Values &v) { return pemi_b * v.y1; });
        emit("pemi_optimal", e1.epsilon0, [&](const Values &v) { return pemi_o * v.y1; });
        emit("ee_imperfect", 2.0, [](const Values &v) { return extrapolate_linear(v.y1, v.y2, 2.0); });
        emit("ee_optimized", lambda_ee, [&](const Values &v) { return extrapolate_linear(v.y1, v.y2, lambda_ee); });
        emit("pec_imperfect", lambda0, [](const Values &v) { return v.pec0; });
        emit("pec_optimized", lambda_opt, [](const Values &v) { return v.pec_opt; });
        emit("pec_shifted", lambda_methods, [](const Values &v) { return v.pec_methods; });
        emit("vd", std::nan(""), [](const Values &v) { return v.vd; });
        emit("vd_pemi", eps_vd, [&](const Values &v) { return vd_pemi(v.vd, eps_vd); });
    }
    Table fits = fits_table();
    add_fits(fits, t, "rmse", "formula", [&](size_t r) { return t.number(r, "rmse"); });
    result.tables = {t, train_t, fits};
    return result;
}

ExperimentResult run_error_propagation(const ExperimentConfig &cfg, size_t workers) {
    const std::string inserted = cfg.options.value("inserted", "XX");
    if (inserted.size() != 2) throw ConfigError("inserted error must name two Paulis");
    const std::array<Pauli, 2> err{pauli_from_char(inserted[0]), pauli_from_char(inserted[1])};
    const uint32_t qubit = cfg.options.value("qubit", 0);
    Table t = make_table("propagation", {"n", "N", "replicate", "circuits", "D_I", "D_X", "D_Y", "D_Z", "se_D_I",
                                         "se_D_X", "se_D_Y", "se_D_Z"});
    for (const GridPoint &p : grid(cfg)) {
        auto frame = point_frame(cfg, p);
        if (qubit >= p.n) throw ConfigError("observed qubit out of range");
        using Dev = std::array<double, 4>;
        std::vector<Dev> dev = parallel_map<Dev>(cfg.n_test, workers, [&](size_t i) {
            Rng rng = stream_rng(cfg, kTest, p.index, i);
            std::vector<int> idx(frame->num_slots());
            for (int &k : idx) k = static_cast<int>(uniform_index(rng, kC1Size));
            std::array<double, 4> counts{};
            auto factors = propagated_factors_on_qubit(bind_cliffords(frame, idx), err, qubit);
            for (Pauli f : factors) counts[static_cast<int>(f)] += 1;
            Dev d;
            for (int k = 0; k < 4; k++) d[k] = std::abs(counts[k] / factors.size() - 0.25);
            return d;
        });
        std::vector<Cell> row{as_int(p.n), as_int(p.gates), as_int(p.replicate), as_int(cfg.n_test)};
        std::array<double, 4> mean{}, se{};
        // Column order I, X, Y, Z; the Pauli encoding is I, X, Z, Y.
        const int order[4] = {0, 1, 3, 2};
        for (int c = 0; c < 4; c++) {
            int k = order[c];
            for (const Dev &d : dev) mean[c] += d[k];
            mean[c] /= dev.size();
            double v = 0;
            for (const Dev &d : dev) v += (d[k] - mean[c]) * (d[k] - mean[c]);
            se[c] = std::sqrt(v / std::max<size_t>(1, dev.size() - 1) / dev.size());
        }
        for (double m : mean) row.push_back(m);
        for (double s : se) row.push_back(s);
        t.rows.push_back(std::move(row));
    }
    Table fits = fits_table();
    for (const char *col : {"D_I", "D_X", "D_Y", "D_Z"}) {
        add_fits(fits, t, col, "n", [&](size_t r) { return t.number(r, col); });
    }
    return {{t, fits}, {}};
}

ExperimentResult run_feasibility(const ExperimentConfig &cfg, size_t workers) {
    std::vector<std::string> algorithms = cfg.options.value("algorithms", std::vector<std::string>{"nonuniform", "uniform"});
    Table t = make_table("feasibility", {"n", "N", "replicate", "algorithm", "lambda_u", "lambda_c", "Lp_u", "Lp_c",
                                         "ratio", "acceptance"});
    ExperimentResult result;
    for (const GridPoint &p : grid(cfg)) {
        if (!density_fits(p, result)) continue;
        auto frame = point_frame(cfg, p);
        ResolvedNoise noise = resolve_noise(cfg, p);
        UnitarySet test = draw_unitary(cfg, frame, p.index, cfg.n_test, workers);
        std::vector<double> y = parallel_map<double>(cfg.n_test, workers, [&](size_t i) {
            return expectation(run(test.circuits[i], noise.model), test.circuits[i].observable());
        });
        double syf = 0, syy = 0;
        for (size_t i = 0; i < y.size(); i++) {
            syf += y[i] * test.f[i];
            syy += y[i] * y[i];
        }
        if (syy <= 0) throw NumericalError("all noisy test values vanish");
        const double lambda_u = syf / syy;
        auto loss = [&](double lambda) {
            double s = 0;
            for (size_t i = 0; i < y.size(); i++) s += (lambda * y[i] - test.f[i]) * (lambda * y[i] - test.f[i]);
            return s / y.size();
        };
        for (const std::string &alg : algorithms) {
            EsSet train = draw_es(cfg, frame, p.index, alg, workers);
            std::vector<double> yf = es_values(train, noise.model, workers);
            double a = 0, b = 0;
            for (size_t i = 0; i < yf.size(); i++) {
                // f = +-1, so y f = y / f and y^2 = (y f)^2.
                a += train.weights[i] * yf[i];
                b += train.weights[i] * yf[i] * yf[i];
            }
            if (b <= 0) throw NumericalError("all noisy training values vanish");
            const double lambda_c = a / b;
            const double lu = loss(lambda_u), lc = loss(lambda_c);
            t.rows.push_back({as_int(p.n), as_int(p.gates), as_int(p.replicate), alg, lambda_u, lambda_c, lu, lc,
                              lu > 0 ? lc / lu : std::nan(""), train.acceptance});
        }
    }
    result.tables = {t};
    return result;
}

ExperimentResult run_fc_dependence(const ExperimentConfig &cfg, size_t workers) {
    std::vector<double> scales =
        cfg.options.value("rotation_scales", std::vector<double>{0.02, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6, M_PI});
    const size_t bin_size = cfg.options.value("bin_size", 10);
    if (scales.empty() || bin_size < 1) throw ConfigError("fc_dependence needs rotation scales and a positive bin size");
    Table t = make_table("fc_dependence", {"n", "N", "replicate", "bin", "mean_abs_f", "err_before", "err_after",
                                           "ratio", "es_ratio"});
    ExperimentResult result;
    for (const GridPoint &p : grid(cfg)) {
        if (!density_fits(p, result)) continue;
        auto frame = point_frame(cfg, p);
        ResolvedNoise noise = resolve_noise(cfg, p);
        EsSet train = draw_es(cfg, frame, p.index, "nonuniform", workers);
        std::vector<double> yf = es_values(train, noise.model, workers);
        PhenomenologicalEstimate est = estimate(train, yf, "nonuniform");
        const double factor = pemi_factor(est.epsilon0, est.delta, true);
        double lb = 0, la = 0, sw = 0;
        for (size_t i = 0; i < yf.size(); i++) {
            lb += train.weights[i] * (yf[i] - 1) * (yf[i] - 1);
            la += train.weights[i] * (factor * yf[i] - 1) * (factor * yf[i] - 1);
            sw += train.weights[i];
        }
        const double es_ratio = la > 0 ? std::sqrt(lb / la) : std::nan("");

        struct Item {
            double f, y;
            size_t index;
        };
        std::vector<Item> items = parallel_map<Item>(cfg.n_test, workers, [&](size_t i) {
            Rng rng = stream_rng(cfg, kTestSecond, p.index, i);
            Circuit c = bind_near_one_fc(frame, scales[i % scales.size()], rng);
            return Item{statevector_expectation(c), expectation(run(c, noise.model), c.observable()), i};
        });
        std::stable_sort(items.begin(), items.end(),
                         [](const Item &a, const Item &b) { return std::abs(a.f) < std::abs(b.f); });
        for (size_t b = 0; b * bin_size < items.size(); b++) {
            double mf = 0, eb = 0, ea = 0;
            size_t cnt = 0;
            for (size_t k = b * bin_size; k < std::min(items.size(), (b + 1) * bin_size); k++, cnt++) {
                mf += std::abs(items[k].f);
                eb += (items[k].y - items[k].f) * (items[k].y - items[k].f);
                ea += (factor * items[k].y - items[k].f) * (factor * items[k].y - items[k].f);
            }
            eb = std::sqrt(eb / cnt);
            ea = std::sqrt(ea / cnt);
            t.rows.push_back({as_int(p.n), as_int(p.gates), as_int(p.replicate), as_int(b), mf / cnt, eb, ea,
                              ea > 0 ? eb / ea : std::nan(""), es_ratio});
        }
        if (noise.model.noiseless()) result.warnings.push_back("noiseless model: suppression ratios are undefined");
    }
    result.tables = {t};
    return result;
}

template <typename T>
T option_or(const json &j, const char *key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

std::string to_string(Experiment e) { return kExperimentNames[static_cast<int>(e)]; }

Experiment experiment_from_string(const std::string &name) {
    for (int k = 0; k < 7; k++) {
        if (name == kExperimentNames[k]) return static_cast<Experiment>(k);
    }
    throw ConfigError("unknown experiment: " + name);
}

ExperimentConfig parse_config(const json &j) {
    ExperimentConfig cfg;
    try {
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        cfg.source = j;
        cfg.experiment = experiment_from_string(j.at("experiment").get<std::string>());
        const json &fam = j.at("family");
        cfg.kind = frame_kind_from_string(fam.at("kind").get<std::string>());
        cfg.qubits = fam.at("qubits").get<std::vector<size_t>>();
        cfg.gates = fam.at("gates").get<std::vector<size_t>>();
        cfg.gate = gate_kind_from_string(option_or<std::string>(fam, "gate", "cz"));
        cfg.periodic_wrap = option_or<bool>(fam, "periodic_wrap", true);

        const json &nz = j.at("noise");
        json model = nz;
        if (nz.contains("epsilon") && nz.at("epsilon").is_string()) {
            if (nz.at("epsilon").get<std::string>() != "sampled") throw ConfigError("epsilon must be a number or \"sampled\"");
            cfg.noise.sampled_rate = true;
            model["epsilon"] = 0.0;
        }
        if (model.at("kind") == "composite" && !model.contains("params")) {
            if (!cfg.noise.sampled_rate) cfg.noise.composite_budget = model.at("epsilon").get<double>();
            model["params"] = composite_to_json(CompositeParams{});
        }
        if (model.at("kind") == "depol_dephase" && model.contains("scale")) {
            const double s = model.at("scale").get<double>();
            model["eps_d"] = model.at("eps_d").get<double>() * s;
            model["eps_z"] = model.at("eps_z").get<double>() * s;
        }
        cfg.noise.model = noise_from_json(model);
        if (cfg.noise.sampled_rate && (cfg.noise.model.kind == NoiseKind::DepolDephase || cfg.noise.model.kind == NoiseKind::None)) {
            throw ConfigError("sampled rates apply to single-rate models and composite budgets");
        }

        cfg.n_train = option_or<size_t>(j, "n_train", 1000);
        cfg.n_test = option_or<size_t>(j, "n_test", 1000);
        cfg.replicates = option_or<size_t>(j, "replicates", 1);
        cfg.seed = option_or<uint64_t>(j, "seed", 0);
        cfg.output = option_or<std::string>(j, "output", to_string(cfg.experiment) + ".csv");
        cfg.options = option_or<json>(j, "options", json::object());
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    if (cfg.qubits.empty() || cfg.gates.empty()) throw ConfigError("family grid must be non-empty");
    if (cfg.n_train < 2 || cfg.n_test < 1 || cfg.replicates < 1) throw ConfigError("sample counts must be positive");
    for (size_t n : cfg.qubits) {
        if (n < 2) throw ConfigError("frames need at least two qubits");
        if (cfg.kind == FrameKind::PeriodicCycling && n % 2) throw ConfigError("periodic cycling needs an even qubit count");
    }
    for (size_t g : cfg.gates) {
        if (g < 1) throw ConfigError("two-qubit gate counts must be positive");
    }
    if (cfg.output.empty() || cfg.output.find('/') != std::string::npos) throw ConfigError("output must be a file name");
    return cfg;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

size_t Table::column(const std::string &col) const {
    auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) throw std::out_of_range("no column " + col + " in table " + name);
    return static_cast<size_t>(it - columns.begin());
}

double Table::number(size_t row, const std::string &col) const {
    const Cell &c = rows.at(row).at(column(col));
    if (auto *d = std::get_if<double>(&c)) return *d;
    if (auto *i = std::get_if<int64_t>(&c)) return static_cast<double>(*i);
    const std::string &s = std::get<std::string>(c);
    if (s == "nan") return std::nan("");
    try {
        return std::stod(s);
    } catch (const std::exception &) {
        throw std::invalid_argument("column " + col + " is not numeric");
    }
}

const Table &ExperimentResult::table(const std::string &name) const {
    for (const Table &t : tables) {
        if (t.name == name) return t;
    }
    throw std::out_of_range("no table " + name);
}

namespace {

ExperimentResult dispatch(const ExperimentConfig &cfg, size_t workers) {
    switch (cfg.experiment) {
        case Experiment::EpsilonHistogram:
            return run_epsilon_histogram(cfg, workers);
        case Experiment::ScalingSweep:
            return run_scaling_sweep(cfg, workers);
        case Experiment::GateDependentSweep:
            return run_gate_dependent_sweep(cfg, workers);
        case Experiment::FormulaComparison:
            return run_formula_comparison(cfg, workers);
        case Experiment::ErrorPropagation:
            return run_error_propagation(cfg, workers);
        case Experiment::Feasibility:
            return run_feasibility(cfg, workers);
        case Experiment::FcDependence:
            return run_fc_dependence(cfg, workers);
    }
    throw ConfigError("unknown experiment");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig &cfg, size_t workers) {
    try {
        ExperimentResult result = dispatch(cfg, workers);
        // Error propagation is stabilizer-only and cheap at any size.
        const bool heavy = cfg.experiment != Experiment::ErrorPropagation &&
                           (*std::max_element(cfg.qubits.begin(), cfg.qubits.end()) > 8 ||
                            *std::max_element(cfg.gates.begin(), cfg.gates.end()) > 300 ||
                            std::max(cfg.n_train, cfg.n_test) > 1000);
        if (heavy) result.warnings.insert(result.warnings.begin(), "beyond desk scale (n <= 8, N <= 300, 1000 circuits); expect a long run");
        return result;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("bad option: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw NumericalError(e.what());
    }
}

std::string format_cell(const Cell &c) {
    if (auto *d = std::get_if<double>(&c)) {
        if (std::isnan(*d)) return "nan";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        return buf;
    }
    if (auto *i = std::get_if<int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

std::string to_csv(const Table &t) {
    std::ostringstream out;
    for (size_t k = 0; k < t.columns.size(); k++) out << (k ? "," : "") << t.columns[k];
    out << "\n";
    for (const auto &row : t.rows) {
        for (size_t k = 0; k < row.size(); k++) out << (k ? "," : "") << format_cell(row[k]);
        out << "\n";
    }
    return out.str();
}

Table read_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    Table t;
    t.name = std::filesystem::path(path).stem().string();
    std::string line;
    auto split = [](const std::string &s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(item);
        return out;
    };
    if (!std::getline(in, line)) throw ConfigError(path + " is empty");
    t.columns = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<Cell> row;
        for (auto &s : split(line)) row.emplace_back(s);
        if (row.size() != t.columns.size()) throw ConfigError(path + ": ragged row");
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string config_hash(const json &j) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> write_result(const ExperimentConfig &cfg, const ExperimentResult &result,
                                      const std::string &dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> paths;
    const fs::path main = fs::path(dir) / cfg.output;
    json tables = json::array();
    for (size_t k = 0; k < result.tables.size(); k++) {
        fs::path p = k == 0 ? main
                            : main.parent_path() / (main.stem().string() + "_" + result.tables[k].name +
                                                    main.extension().string());
        std::ofstream out(p);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << to_csv(result.tables[k]);
        paths.push_back(p.string());
        tables.push_back({{"name", result.tables[k].name}, {"file", p.filename().string()}});
    }
    json source = cfg.source;
    source["seed"] = cfg.seed;
    json meta = {{"experiment", to_string(cfg.experiment)},
                 {"config", source},
                 {"config_hash", config_hash(source)},
                 {"seed", cfg.seed},
                 {"git_revision", "unknown"},
                 {"tables", tables},
                 {"warnings", result.warnings}};
    fs::path mp = main;
    mp += ".meta.json";
    std::ofstream(mp) << meta.dump(2) << "\n";
    paths.push_back(mp.string());
    return paths;
}

double noisy_expectation(const Circuit &circuit, const NoiseModel &noise) {
    if (circuit.is_clifford() && noise.is_pauli()) {
        return pauli_noise_expectation(circuit, noise);
    }
    return expectation(run(circuit, noise), circuit.observable());
}

}  // namespace qem
