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

#ifndef QEMICS_MITIGATION_H
#define QEMICS_MITIGATION_H

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "qemics/circuit.h"
#include "qemics/ics.h"
#include "qemics/noise.h"

namespace qem {

/// y / (1 - eps0) (basic) or (1 - eps0) / ((1 - eps0)^2 + delta^2) * y (optimal).
double pemi_factor(double epsilon0, double delta, bool optimal);
double pemi(double y, const PhenomenologicalEstimate &est, bool optimal);

/// lambda y1 + (1 - lambda) y2.
double extrapolate_linear(double y1, double y2, double lambda);
/// Lambda making the formula exact on one training circuit: (f - y2) / (y1 - y2).
double train_lambda_single(double y_t1, double y_t2, double f_t, double tol = 1e-12);
/// Least-squares lambda over a training set (minimises the mean of (y' - f)^2, weighted).
double train_lambda(const std::vector<double> &y1, const std::vector<double> &y2, const std::vector<double> &f,
                    const std::vector<double> &weights = {});
/// eps2 / (eps2 - eps1): cancels the average depolarising rates.
double optimal_lambda_from_rates(double eps1, double eps2);
/// Lambda of the linear formula that is exact under global depolarising with N noisy gates at
/// rate eps (second circuit at rate 2 eps).
double global_depolarising_lambda(double eps, size_t n_gates);

/// q with sum q = 1 and sum q r^k = 0 for k = 1..m; needs m + 1 distinct factors.
std::vector<double> richardson_coefficients(const std::vector<double> &r, size_t m);
double richardson_extrapolate(const std::vector<double> &ys, const std::vector<double> &q);

/// -16 eps_d / (15 - 16 eps_d): exact inverse of gate depolarising at eps_d.
double pec_exact_lambda(double eps_d);
/// Expectation with the inverse map (1 - lambda)[I] + lambda D applied after every noisy
/// two-qubit gate. Clifford circuits under Pauli noise use the stabilizer engine.
double pec_mitigate(const Circuit &circuit, const NoiseModel &noise, double lambda);
/// Closed-form cancellation of global depolarising: y / (1 - eps)^N.
double pec_global_closed_form(double y, double eps, size_t n_gates);

/// Minimum of a unimodal function on [lo, hi].
double golden_section_minimize(const std::function<double(double)> &f, double lo, double hi, double tol = 1e-6);

/// Tr(Q rho^2) / Tr(rho^2) of the noisy output state.
double virtual_distillation(const Circuit &circuit, const NoiseModel &noise);
double virtual_distillation_ratio(double tr_q_rho2, double tr_rho2);
/// Second-order distillation factor y'/f for a globally depolarised n-qubit pure state.
double vd_global_factor(double eps_t, size_t n);
/// eps0' = 1 - mean(y' f) over error-sensitive training circuits.
double vd_pemi_rate(const std::vector<double> &y_vd, const std::vector<int> &f);
/// y'' = y' / (1 - eps0').
double vd_pemi(double y_vd, double eps0_prime);

/// Per-amplification mean rates (E_i = 1 - eps_i), fluctuation covariance K and eta.
struct CovarianceEstimate {
    Eigen::VectorXd e;
    Eigen::MatrixXd k;
    double eta = 1;
};
/// From unitary circuits: y[i][c] at amplification i for circuit c, ideal f[c]. Effective rates
/// 1 - y/f are weighted by f^2; circuits with f = 0 carry no weight.
CovarianceEstimate estimate_covariance(const std::vector<std::vector<double>> &y, const std::vector<double> &f);
/// (sqrt(eta E^T K E) / |E|^2, sqrt(eta sum_i K_ii) / |E|).
std::pair<double, double> fluctuation_bounds(const CovarianceEstimate &est);
/// sqrt(eta ((E^T q - 1)^2 + q^T K q)).
double predicted_rmse(const CovarianceEstimate &est, const Eigen::VectorXd &q);

struct PemiBasic {
    double epsilon0 = 0;
};
struct PemiOptimal {
    double epsilon0 = 0;
    double delta = 0;
};
struct LinearExtrapolation {
    double lambda = 2;
};
struct Richardson {
    std::vector<double> r;
    std::vector<double> q;
};
struct PecInverse {
    double lambda = 0;
};
struct VirtualDistillation {};
struct VdPemi {
    double epsilon0_prime = 0;
};

using MitigationFormula =
    std::variant<PemiBasic, PemiOptimal, LinearExtrapolation, Richardson, PecInverse, VirtualDistillation, VdPemi>;

std::string formula_name(const MitigationFormula &f);
/// Mitigated value from the formula's inputs: one raw value for PEMI and PEC (the PEC value
/// is measured on the corrected circuit), one per noise level for extrapolation, and
/// (Tr(Q rho^2), Tr(rho^2)) for the distillation formulas.
double apply_formula(const MitigationFormula &f, const std::vector<double> &inputs);

nlohmann::json formula_to_json(const MitigationFormula &f);
/// Throws std::invalid_argument on malformed input.
MitigationFormula formula_from_json(const nlohmann::json &j);

}  // namespace qem

#endif
