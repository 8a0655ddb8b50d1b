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

#ifndef QEMICS_HARNESS_H
#define QEMICS_HARNESS_H

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qemics/circuit.h"
#include "qemics/fit.h"
#include "qemics/ics.h"
#include "qemics/noise.h"

namespace qem {

/// Invalid or inconsistent configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// A computation that cannot produce a meaningful number (CLI exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Experiment {
    EpsilonHistogram,
    ScalingSweep,
    GateDependentSweep,
    FormulaComparison,
    ErrorPropagation,
    Feasibility,
    FcDependence,
};
std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string &name);

/// Noise description of a config; rates may be drawn per grid point.
struct NoiseSpec {
    NoiseModel model;
    /// Draw the per-gate rate as 10^u / N with u uniform in [-2.5, -0.5].
    bool sampled_rate = false;
    /// Composite: draw parameters around this total budget at every grid point.
    std::optional<double> composite_budget;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::ScalingSweep;
    FrameKind kind = FrameKind::AllToAll;
    std::vector<size_t> qubits;
    /// Two-qubit gate counts.
    std::vector<size_t> gates;
    GateKind gate = GateKind::CZ;
    bool periodic_wrap = true;
    NoiseSpec noise;
    size_t n_train = 1000;
    size_t n_test = 1000;
    size_t replicates = 1;
    uint64_t seed = 0;
    std::string output = "results.csv";
    /// Experiment-specific settings, validated by parse_config.
    nlohmann::json options = nlohmann::json::object();
    /// The parsed document, echoed into the metadata sidecar.
    nlohmann::json source;
};

/// Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json &j);
ExperimentConfig load_config(const std::string &path);

using Cell = std::variant<double, int64_t, std::string>;
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    size_t column(const std::string &name) const;
    double number(size_t row, const std::string &name) const;
};

struct ExperimentResult {
    /// The first table is the primary output.
    std::vector<Table> tables;
    std::vector<std::string> warnings;

    const Table &table(const std::string &name) const;
};

/// Runs the configured experiment. Results do not depend on `workers`.
ExperimentResult run_experiment(const ExperimentConfig &config, size_t workers = 1);

std::string format_cell(const Cell &c);
std::string to_csv(const Table &t);
Table read_csv(const std::string &path);
/// Writes every table (the first to config.output, the rest with a "_<name>" suffix) and a
/// ".meta.json" sidecar into `dir`. Returns the written paths.
std::vector<std::string> write_result(const ExperimentConfig &config, const ExperimentResult &result,
                                      const std::string &dir);
/// FNV-1a hash of the canonical config dump, as hex.
std::string config_hash(const nlohmann::json &j);

/// Noisy <Q>: stabilizer engine for Clifford circuits under Pauli noise, density matrix otherwise.
double noisy_expectation(const Circuit &circuit, const NoiseModel &noise);

/// fn(i) for i in [0, count) on `workers` threads; results in index order.
template <typename T>
std::vector<T> parallel_map(size_t count, size_t workers, const std::function<T(size_t)> &fn) {
    std::vector<T> out;
    out.reserve(count);
    if (workers <= 1 || count < 2) {
        for (size_t i = 0; i < count; i++) out.push_back(fn(i));
        return out;
    }
    std::vector<std::optional<T>> slots(count);
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (size_t i; !failed && (i = next++) < count;) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (size_t w = 0; w < std::min(workers, count); w++) pool.emplace_back(work);
    for (auto &t : pool) t.join();
    if (error) std::rethrow_exception(error);
    for (auto &s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace qem

#endif
