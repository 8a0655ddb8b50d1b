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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qemics/circuit_io.h"
#include "qemics/fit.h"
#include "qemics/harness.h"
#include "qemics/ics.h"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

using nlohmann::json;

int cmd_run(const std::string &config_path, const std::optional<uint64_t> &seed, const std::string &out_dir,
            size_t workers) {
    qem::ExperimentConfig cfg = qem::load_config(config_path);
    if (seed) cfg.seed = *seed;
    qem::ExperimentResult result = qem::run_experiment(cfg, workers);
    for (const std::string &w : result.warnings) std::cerr << "warning: " << w << "\n";
    for (const std::string &p : qem::write_result(cfg, result, out_dir)) std::cout << p << "\n";
    return 0;
}

int cmd_fit(const std::string &input, const std::string &x, const std::string &y, const std::string &group) {
    qem::Table t = qem::read_csv(input);
    std::optional<size_t> gc;
    try {
        t.column(x);
        t.column(y);
        if (!group.empty()) gc = t.column(group);
    } catch (const std::out_of_range &e) {
        throw qem::ConfigError(e.what());
    }
    std::vector<std::string> keys;
    for (const auto &row : t.rows) {
        std::string k = gc ? qem::format_cell(row[*gc]) : "all";
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
    json out = json::array();
    for (const std::string &k : keys) {
        std::vector<std::pair<double, double>> pts;
        for (size_t r = 0; r < t.rows.size(); r++) {
            if (gc && qem::format_cell(t.rows[r][*gc]) != k) continue;
            pts.emplace_back(t.number(r, x), t.number(r, y));
        }
        qem::ScalingFit fit;
        try {
            fit = qem::fit_power_law(pts);
        } catch (const std::invalid_argument &e) {
            throw qem::NumericalError(e.what());
        }
        out.push_back({{"group", k},
                       {"x", x},
                       {"y", y},
                       {"exponent", fit.exponent},
                       {"se_exponent", fit.se_exponent},
                       {"prefactor", fit.prefactor},
                       {"r_squared", fit.r_squared},
                       {"points", fit.points.size()}});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_sample(const std::string &frame_path, const std::string &algorithm, size_t count, uint64_t seed,
               std::optional<size_t> proposal_m, std::optional<size_t> burn_in) {
    std::ifstream in(frame_path);
    if (!in) throw qem::ConfigError("cannot read frame " + frame_path);
    std::shared_ptr<const qem::CircuitFrame> frame;
    try {
        frame = qem::frame_from_json(json::parse(in));
    } catch (const json::exception &e) {
        throw qem::ConfigError(std::string("frame is not valid JSON: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw qem::ConfigError(e.what());
    }
    qem::Rng rng = qem::make_rng(seed, 0);
    std::vector<qem::EsSample> samples;
    if (algorithm == "nonuniform") {
        samples = qem::sample_nonuniform(frame, count, rng);
    } else {
        const size_t len = frame->num_slots() - frame->num_qubits();
        if (len == 0) throw qem::ConfigError("frame has no slots outside the first layer");
        const size_t m = proposal_m.value_or(std::max<size_t>(1, len / 4));
        if (m < 1 || m > len) throw qem::ConfigError("--proposal-m must lie in [1, " + std::to_string(len) + "]");
        qem::ChainResult chain = qem::sample_uniform(frame, count, qem::default_proposal(m, len), std::nullopt, rng, burn_in);
        std::cerr << "acceptance " << static_cast<double>(chain.accepted) / static_cast<double>(chain.proposed) << "\n";
        samples = std::move(chain.samples);
    }
    for (const qem::EsSample &s : samples) {
        json line = {{"circuit", qem::circuit_to_json(s.circuit)},
                     {"w", s.weight},
                     {"f", s.f},
                     {"weight_factor", s.weight_factor}};
        std::cout << line.dump() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Error-sensitive circuit sampling and quantum error mitigation experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::optional<uint64_t> seed;
    size_t workers = 1;
    auto *run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("--config", config_path, "Experiment config")->required();
    run->add_option("--seed", seed, "Override the config seed");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    std::string input, x = "N", y = "ratio", group;
    auto *fit = app.add_subcommand("fit", "Power-law fit of one CSV column against another");
    fit->add_option("--input", input, "Results CSV")->required();
    fit->add_option("--x", x, "Abscissa column");
    fit->add_option("--y", y, "Ordinate column");
    fit->add_option("--group", group, "Fit separately per value of this column");

    std::string frame_path, algorithm = "nonuniform";
    size_t count = 1000;
    uint64_t sample_seed = 0;
    std::optional<size_t> proposal_m, burn_in;
    auto *sample = app.add_subcommand("sample", "Dump error-sensitive circuits as JSON lines");
    sample->add_option("--frame", frame_path, "Frame JSON")->required();
    sample->add_option("--algorithm", algorithm, "Sampler")->check(CLI::IsMember({"nonuniform", "uniform"}));
    sample->add_option("--count", count, "Number of circuits")->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_seed, "Seed");
    sample->add_option("--proposal-m", proposal_m, "Slots resampled per chain proposal");
    sample->add_option("--burn-in", burn_in, "Discarded chain steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*run) return cmd_run(config_path, seed, out_dir, workers);
        if (*fit) return cmd_fit(input, x, y, group);
        return cmd_sample(frame_path, algorithm, count, sample_seed, proposal_m, burn_in);
    } catch (const qem::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const qem::NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::invalid_argument &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
