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
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.h"
#include "qemics/circuit_io.h"
#include "qemics/density.h"
#include "qemics/harness.h"
#include "qemics/stabilizer.h"

namespace qem {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json base_config(const std::string &experiment) {
    return json{{"experiment", experiment},
                {"family", {{"kind", "all_to_all"}, {"qubits", {3}}, {"gates", {10, 20, 40}}}},
                {"noise", {{"kind", "global_depolarising"}, {"epsilon", 0.01}}},
                {"n_train", 60},
                {"n_test", 30},
                {"seed", 5}};
}

fs::path scratch(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("qemics_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(Fit, ExactPowerLaw) {
    auto fit = fit_power_law({{2, 3 * std::sqrt(2.0)}, {8, 3 * std::sqrt(8.0)}, {32, 3 * std::sqrt(32.0)}});
    EXPECT_NEAR(fit.exponent, 0.5, 1e-12);
    EXPECT_NEAR(fit.prefactor, 3, 1e-12);
    EXPECT_NEAR(fit.r_squared, 1, 1e-12);
    EXPECT_NEAR(fit.se_exponent, 0, 1e-7);
    EXPECT_EQ(fit.points.size(), 3u);
}

TEST(Fit, LeastSquaresOnLogs) {
    // log-log points (0, 0), (1, 1), (2, 3): slope 1.5, intercept -1/6
    const double e = std::exp(1.0);
    auto fit = fit_power_law({{1, 1}, {e, e}, {e * e, std::pow(e, 3)}});
    EXPECT_NEAR(fit.exponent, 1.5, 1e-12);
    EXPECT_NEAR(fit.prefactor, std::exp(-1.0 / 6), 1e-12);
    // residuals (1/6, -1/3, 1/6): SSR 1/6, Sxx 2, one degree of freedom
    EXPECT_NEAR(fit.se_exponent, std::sqrt(1.0 / 6 / 2), 1e-12);
    EXPECT_NEAR(fit.r_squared, 1 - (1.0 / 6) / (14.0 / 3), 1e-12);
}

TEST(Fit, RejectsDegenerateInput) {
    EXPECT_THROW(fit_power_law({{1, 1}, {2, 2}}), std::invalid_argument);
    EXPECT_THROW(fit_power_law({{1, 1}, {2, 2}, {3, -1}}), std::invalid_argument);
    EXPECT_THROW(fit_power_law({{2, 1}, {2, 2}, {2, 3}}), std::invalid_argument);
}

TEST(Config, Defaults) {
    json j = base_config("scaling_sweep");
    j.erase("n_train");
    j.erase("seed");
    auto cfg = parse_config(j);
    EXPECT_EQ(cfg.experiment, Experiment::ScalingSweep);
    EXPECT_EQ(cfg.n_train, 1000u);
    EXPECT_EQ(cfg.seed, 0u);
    EXPECT_EQ(cfg.replicates, 1u);
    EXPECT_EQ(cfg.output, "scaling_sweep.csv");
    EXPECT_TRUE(cfg.periodic_wrap);
    EXPECT_EQ(cfg.gate, GateKind::CZ);
}

TEST(Config, SampledRateAndScale) {
    json j = base_config("scaling_sweep");
    j["noise"] = {{"kind", "gate_depolarising"}, {"epsilon", "sampled"}};
    EXPECT_TRUE(parse_config(j).noise.sampled_rate);
    j["noise"] = {{"kind", "depol_dephase"}, {"eps_d", 8e-5}, {"eps_z", 2e-5}, {"scale", 10}};
    auto cfg = parse_config(j);
    EXPECT_NEAR(cfg.noise.model.eps_d, 8e-4, 1e-18);
    EXPECT_NEAR(cfg.noise.model.eps_z, 2e-4, 1e-18);
    j["noise"] = {{"kind", "composite"}, {"epsilon", 0.01}};
    EXPECT_EQ(parse_config(j).noise.composite_budget, 0.01);
}

TEST(Config, Errors) {
    auto bad = [](const std::function<void(json &)> &edit) {
        json j = base_config("scaling_sweep");
        edit(j);
        return j;
    };
    std::vector<json> cases{
        bad([](json &j) { j.erase("experiment"); }),
        bad([](json &j) { j["experiment"] = "nope"; }),
        bad([](json &j) { j["family"]["kind"] = "ring"; }),
        bad([](json &j) { j["family"]["qubits"] = {1}; }),
        bad([](json &j) { j["family"]["gates"] = json::array(); }),
        bad([](json &j) { j["family"]["gates"] = {0}; }),
        bad([](json &j) { j["family"] = {{"kind", "periodic_cycling"}, {"qubits", {5}}, {"gates", {10}}}; }),
        bad([](json &j) { j["noise"] = {{"kind", "gate_depolarising"}, {"epsilon", "lots"}}; }),
        bad([](json &j) { j["noise"] = {{"kind", "depol_dephase"}, {"eps_d", "sampled"}, {"eps_z", 0.1}}; }),
        bad([](json &j) { j["noise"] = {{"kind", "gate_depolarising"}, {"epsilon", -0.1}}; }),
        bad([](json &j) { j["n_train"] = 1; }),
        bad([](json &j) { j["output"] = "../x.csv"; }),
        bad([](json &j) { j["seed"] = "abc"; }),
        json::array(),
    };
    for (const json &j : cases) EXPECT_THROW(parse_config(j), ConfigError) << j.dump();
}

TEST(Config, BadOptionIsConfigError) {
    json j = base_config("epsilon_histogram");
    j["options"] = {{"weighting", "sideways"}};
    EXPECT_THROW(run_experiment(parse_config(j)), ConfigError);
    j = base_config("formula_comparison");
    EXPECT_THROW(run_experiment(parse_config(j)), ConfigError);  // needs depol_dephase noise
}

TEST(Config, LoadErrors) {
    auto dir = scratch("load");
    EXPECT_THROW(load_config((dir / "missing.json").string()), ConfigError);
    std::ofstream(dir / "broken.json") << "{ not json";
    EXPECT_THROW(load_config((dir / "broken.json").string()), ConfigError);
}

TEST(Harness, GlobalDepolarisingHistogramIsAPoint) {
    auto result = run_experiment(parse_config(base_config("epsilon_histogram")));
    const Table &summary = result.tables.front();
    ASSERT_EQ(summary.rows.size(), 3u);
    for (size_t r = 0; r < summary.rows.size(); r++) {
        const double n_gates = summary.number(r, "N");
        EXPECT_NEAR(summary.number(r, "epsilon0"), 1 - std::pow(0.99, n_gates), 1e-12);
        EXPECT_LT(summary.number(r, "delta"), 1e-12);
    }
    const Table &samples = result.table("samples");
    for (size_t r = 0; r < samples.rows.size(); r++)
        EXPECT_NEAR(samples.number(r, "epsilon_c"), 1 - std::pow(0.99, samples.number(r, "N")), 1e-12);
}

TEST(Harness, FeasibilityUnderGlobalDepolarising) {
    auto result = run_experiment(parse_config(base_config("feasibility")));
    const Table &t = result.tables.front();
    ASSERT_EQ(t.rows.size(), 6u);
    for (size_t r = 0; r < t.rows.size(); r++) {
        const double target = 1 / std::pow(0.99, t.number(r, "N"));
        EXPECT_NEAR(t.number(r, "lambda_u"), target, 1e-9);
        EXPECT_NEAR(t.number(r, "lambda_c"), target, 1e-9);
        EXPECT_LT(t.number(r, "Lp_u"), 1e-20);
        EXPECT_LT(t.number(r, "Lp_c"), 1e-20);
    }
}

TEST(Harness, FcDependenceUnderGlobalDepolarising) {
    json j = base_config("fc_dependence");
    j["options"] = {{"bin_size", 10}};
    auto result = run_experiment(parse_config(j));
    const Table &t = result.tables.front();
    ASSERT_FALSE(t.rows.empty());
    for (size_t r = 0; r < t.rows.size(); r++) {
        const double eps0 = 1 - std::pow(0.99, t.number(r, "N"));
        EXPECT_LE(t.number(r, "err_before"), eps0 + 1e-12);
        EXPECT_GT(t.number(r, "err_before"), 0);
        EXPECT_LT(t.number(r, "err_after"), 1e-12);
    }
}

TEST(Harness, ResultsIndependentOfWorkerCount) {
    for (const char *exp : {"scaling_sweep", "epsilon_histogram", "feasibility"}) {
        json j = base_config(exp);
        j["noise"] = {{"kind", "gate_depolarising"}, {"epsilon", "sampled"}};
        if (std::string(exp) == "epsilon_histogram") j["noise"] = {{"kind", "gate_depolarising"}, {"epsilon", 0.01}};
        auto cfg = parse_config(j);
        auto a = run_experiment(cfg, 1), b = run_experiment(cfg, 3), c = run_experiment(cfg, 2);
        ASSERT_EQ(a.tables.size(), b.tables.size());
        for (size_t i = 0; i < a.tables.size(); i++) {
            EXPECT_EQ(to_csv(a.tables[i]), to_csv(b.tables[i])) << exp << " " << a.tables[i].name;
            EXPECT_EQ(to_csv(a.tables[i]), to_csv(c.tables[i])) << exp << " " << a.tables[i].name;
        }
        j["seed"] = 6;
        EXPECT_NE(to_csv(run_experiment(parse_config(j)).tables.front()), to_csv(a.tables.front())) << exp;
    }
}

TEST(Harness, WriteAndReadBack) {
    auto dir = scratch("write");
    auto cfg = parse_config(base_config("scaling_sweep"));
    auto result = run_experiment(cfg);
    auto paths = write_result(cfg, result, dir.string());
    ASSERT_EQ(paths.size(), result.tables.size() + 1);
    Table back = read_csv((dir / "scaling_sweep.csv").string());
    EXPECT_EQ(back.columns, result.tables.front().columns);
    ASSERT_EQ(back.rows.size(), result.tables.front().rows.size());
    for (size_t r = 0; r < back.rows.size(); r++)
        EXPECT_EQ(back.number(r, "epsilon0"), result.tables.front().number(r, "epsilon0"));
    json meta = json::parse(slurp(dir / "scaling_sweep.csv.meta.json"));
    EXPECT_EQ(meta.at("seed"), 5);
    EXPECT_EQ(meta.at("config_hash"), config_hash(cfg.source));
    EXPECT_EQ(meta.at("experiment"), "scaling_sweep");
    EXPECT_NE(config_hash(json{{"a", 1}}), config_hash(json{{"a", 2}}));
}

TEST(Harness, CellFormatting) {
    EXPECT_EQ(format_cell(Cell{int64_t{42}}), "42");
    EXPECT_EQ(format_cell(Cell{std::string("x")}), "x");
    EXPECT_EQ(format_cell(Cell{std::nan("")}), "nan");
    EXPECT_EQ(std::stod(format_cell(Cell{0.1})), 0.1);
}

TEST(Harness, NoisyExpectationRoutes) {
    Rng rng = make_rng(70, 0);
    auto frame = testing::random_frame(3, 10, rng);
    Circuit c = testing::random_clifford(frame, rng);
    auto noise = NoiseModel::depol_dephase(0.01, 0.005);
    EXPECT_NEAR(noisy_expectation(c, noise), expectation(run(c, noise), c.observable()), 1e-12);
    Circuit u = bind_random_unitary(frame, rng);
    EXPECT_NEAR(noisy_expectation(u, noise), expectation(run(u, noise), u.observable()), 1e-14);
}

TEST(Harness, ParallelMapKeepsOrderAndPropagates) {
    auto v = parallel_map<int>(100, 4, [](size_t i) { return static_cast<int>(i * i); });
    for (size_t i = 0; i < v.size(); i++) EXPECT_EQ(v[i], static_cast<int>(i * i));
    EXPECT_THROW(parallel_map<int>(50, 3,
                                   [](size_t i) -> int {
                                       if (i == 17) throw std::runtime_error("boom");
                                       return 0;
                                   }),
                 std::runtime_error);
}

// CLI checks spawn the built tool.
int cli(const std::string &args) {
    int status = std::system((std::string(QEMICS_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
    auto dir = scratch("cli");
    const std::string d = dir.string();
    std::ofstream(dir / "good.json") << base_config("scaling_sweep").dump();
    json bad = base_config("scaling_sweep");
    bad["family"]["kind"] = "ring";
    std::ofstream(dir / "bad.json") << bad.dump();

    EXPECT_EQ(cli("run --config " + d + "/good.json --out " + d + "/o --workers 2"), 0);
    EXPECT_TRUE(fs::exists(dir / "o" / "scaling_sweep.csv"));
    EXPECT_EQ(cli("run --config " + d + "/bad.json --out " + d + "/o"), 2);
    EXPECT_EQ(cli("run --config " + d + "/missing.json"), 2);
    EXPECT_EQ(cli("run"), 2);
    EXPECT_EQ(cli("frobnicate"), 2);

    EXPECT_EQ(cli("fit --input " + d + "/o/scaling_sweep.csv --x N --y epsilon0"), 0);
    EXPECT_EQ(cli("fit --input " + d + "/o/scaling_sweep.csv --x N --y no_such_column"), 2);
    // a single grid value of N cannot be fitted
    std::ofstream(dir / "flat.csv") << "N,v\n4,1\n4,2\n4,3\n";
    EXPECT_EQ(cli("fit --input " + d + "/flat.csv --x N --y v"), 3);

    auto frame = testing::make_frame(2, {CliffordGate::cz(0, 1)}, "ZI");
    std::ofstream(dir / "frame.json") << frame_to_json(*frame).dump();
    EXPECT_EQ(cli("sample --frame " + d + "/frame.json --algorithm uniform --count 5"), 0);
    EXPECT_EQ(cli("sample --frame " + d + "/frame.json --algorithm nonuniform --count 5"), 0);
    EXPECT_EQ(cli("sample --frame " + d + "/frame.json --algorithm other --count 5"), 2);
    EXPECT_EQ(cli("sample --frame " + d + "/frame.json --algorithm uniform --count 5 --proposal-m 9"), 2);
}

TEST(Cli, SampleOutputIsErrorSensitive) {
    auto dir = scratch("sample");
    auto frame = testing::make_frame(3, {CliffordGate::cz(0, 1), CliffordGate::cnot(2, 1)}, "ZXI");
    std::ofstream(dir / "frame.json") << frame_to_json(*frame).dump();
    const std::string out = (dir / "s.jsonl").string();
    ASSERT_EQ(std::system((std::string(QEMICS_CLI_PATH) + " sample --frame " + (dir / "frame.json").string() +
                           " --algorithm nonuniform --count 20 --seed 4 > " + out)
                              .c_str()),
              0);
    std::ifstream in(out);
    std::string line;
    size_t lines = 0;
    while (std::getline(in, line)) {
        json j = json::parse(line);
        Circuit c = circuit_from_json(j.at("circuit"));
        EXPECT_EQ(std::abs(j.at("f").get<int>()), 1);
        EXPECT_EQ(ideal_expectation(c), j.at("f").get<int>());
        EXPECT_EQ(circuit_weight(c), j.at("w").get<size_t>());
        lines++;
    }
    EXPECT_EQ(lines, 20u);
}

}  // namespace
}  // namespace qem
