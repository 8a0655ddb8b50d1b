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

#include "qemics/mitigation.h"

#include <cmath>
#include <stdexcept>

#include "qemics/density.h"
#include "qemics/stabilizer.h"

namespace qem {

double pemi_factor(double epsilon0, double delta, bool optimal) {
    if (!(epsilon0 < 1)) {
        throw std::invalid_argument("average depolarising rate >= 1; the signal is lost");
    }
    const double a = 1 - epsilon0;
    return optimal ? a / (a * a + delta * delta) : 1 / a;
}

double pemi(double y, const PhenomenologicalEstimate &est, bool optimal) {
    return pemi_factor(est.epsilon0, est.delta, optimal) * y;
}

double extrapolate_linear(double y1, double y2, double lambda) { return lambda * y1 + (1 - lambda) * y2; }

double train_lambda_single(double y_t1, double y_t2, double f_t, double tol) {
    if (std::abs(y_t1 - y_t2) < tol) {
        throw std::invalid_argument("degenerate training circuit: both noise levels give the same value");
    }
    return (f_t - y_t2) / (y_t1 - y_t2);
}

double train_lambda(const std::vector<double> &y1, const std::vector<double> &y2, const std::vector<double> &f,
                    const std::vector<double> &weights) {
    if (y1.empty() || y1.size() != y2.size() || y1.size() != f.size() ||
        (!weights.empty() && weights.size() != f.size())) {
        throw std::invalid_argument("training vectors must be nonempty and of equal length");
    }
    // y' - f = lambda a + b with a = y1 - y2, b = y2 - f.
    double aa = 0, ab = 0;
    for (size_t i = 0; i < f.size(); i++) {
        double w = weights.empty() ? 1.0 : weights[i];
        double a = y1[i] - y2[i], b = y2[i] - f[i];
        aa += w * a * a;
        ab += w * a * b;
    }
    if (aa <= 0) {
        throw std::invalid_argument("degenerate training set: both noise levels give the same values");
    }
    return -ab / aa;
}

double optimal_lambda_from_rates(double eps1, double eps2) {
    if (eps1 == eps2) {
        throw std::invalid_argument("noise levels have equal rates");
    }
    return eps2 / (eps2 - eps1);
}

double global_depolarising_lambda(double eps, size_t n_gates) {
    const double nn = static_cast<double>(n_gates);
    const double a = std::pow(1 - eps, nn), b = std::pow(1 - 2 * eps, nn);
    return (1 - b) / (a - b);
}

std::vector<double> richardson_coefficients(const std::vector<double> &r, size_t m) {
    if (r.size() != m + 1) {
        throw std::invalid_argument("need exactly m + 1 noise factors");
    }
    for (size_t i = 0; i < r.size(); i++) {
        if (!(r[i] > 0)) throw std::invalid_argument("noise factors must be positive");
        for (size_t j = 0; j < i; j++) {
            if (r[i] == r[j]) throw std::invalid_argument("noise factors must be distinct");
        }
    }
    const size_t k = m + 1;
    Eigen::MatrixXd v(k, k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    rhs(0) = 1;
    for (size_t row = 0; row < k; row++)
        for (size_t col = 0; col < k; col++) v(row, col) = std::pow(r[col], static_cast<double>(row));
    Eigen::VectorXd q = v.fullPivLu().solve(rhs);
    return {q.data(), q.data() + k};
}

double richardson_extrapolate(const std::vector<double> &ys, const std::vector<double> &q) {
    if (ys.size() != q.size()) {
        throw std::invalid_argument("values and coefficients differ in length");
    }
    double s = 0;
    for (size_t i = 0; i < q.size(); i++) s += q[i] * ys[i];
    return s;
}

double pec_exact_lambda(double eps_d) {
    if (16 * eps_d >= 15) {
        throw std::invalid_argument("depolarising rate too large to invert");
    }
    return -16 * eps_d / (15 - 16 * eps_d);
}

double pec_mitigate(const Circuit &circuit, const NoiseModel &noise, double lambda) {
    const Channel inverse = depolarising_inverse_map(lambda);
    if (circuit.is_clifford() && noise.is_pauli()) {
        return pauli_noise_expectation(circuit, noise, inverse);
    }
    return expectation(run(circuit, noise, inverse), circuit.observable());
}

double pec_global_closed_form(double y, double eps, size_t n_gates) {
    return y / std::pow(1 - eps, static_cast<double>(n_gates));
}

double golden_section_minimize(const std::function<double(double)> &f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2;
}

double virtual_distillation(const Circuit &circuit, const NoiseModel &noise) {
    auto [num, den] = purity_pair(run(circuit, noise), circuit.observable());
    return virtual_distillation_ratio(num, den);
}

double virtual_distillation_ratio(double tr_q_rho2, double tr_rho2) {
    if (tr_rho2 < 1e-12) {
        throw std::invalid_argument("purity too small for distillation");
    }
    return tr_q_rho2 / tr_rho2;
}

double vd_global_factor(double eps_t, size_t n) {
    const double a = 1 - eps_t;
    const double c = std::pow(2.0, 1.0 - static_cast<double>(n));
    const double num = a * a + c * a * eps_t;
    return num / (num + c / 2 * eps_t * eps_t);
}

double vd_pemi_rate(const std::vector<double> &y_vd, const std::vector<int> &f) {
    if (y_vd.empty() || y_vd.size() != f.size()) {
        throw std::invalid_argument("training vectors must be nonempty and of equal length");
    }
    double s = 0;
    for (size_t i = 0; i < f.size(); i++) s += y_vd[i] * f[i];
    return 1 - s / static_cast<double>(f.size());
}

double vd_pemi(double y_vd, double eps0_prime) {
    if (!(eps0_prime < 1)) {
        throw std::invalid_argument("virtual machine rate >= 1; the signal is lost");
    }
    return y_vd / (1 - eps0_prime);
}

CovarianceEstimate estimate_covariance(const std::vector<std::vector<double>> &y, const std::vector<double> &f) {
    const size_t levels = y.size();
    if (levels == 0) {
        throw std::invalid_argument("no noise levels");
    }
    const size_t m = f.size();
    for (const auto &row : y) {
        if (row.size() != m) throw std::invalid_argument("every noise level needs one value per circuit");
    }
    double sw = 0;
    for (double v : f) sw += v * v;
    if (sw <= 0) {
        throw std::invalid_argument("all circuits have zero ideal value");
    }
    CovarianceEstimate est;
    est.eta = sw / static_cast<double>(m);
    // eps_{C,i} f^2 = (f - y_i) f, so every sum below avoids dividing by f.
    est.e.resize(levels);
    for (size_t i = 0; i < levels; i++) {
        double s = 0;
        for (size_t c = 0; c < m; c++) s += (f[c] - y[i][c]) * f[c];
        est.e(i) = 1 - s / sw;
    }
    est.k = Eigen::MatrixXd::Zero(levels, levels);
    for (size_t i = 0; i < levels; i++) {
        for (size_t j = 0; j <= i; j++) {
            double s = 0;
            for (size_t c = 0; c < m; c++) {
                const double f2 = f[c] * f[c];
                // delta eps_i delta eps_j f^2 with delta eps_i f = (1 - E_i) f - (f - y_i).
                const double di = (1 - est.e(i)) * f[c] - (f[c] - y[i][c]);
                const double dj = (1 - est.e(j)) * f[c] - (f[c] - y[j][c]);
                s += f2 > 0 ? di * dj : 0.0;
            }
            est.k(i, j) = est.k(j, i) = s / sw;
        }
    }
    return est;
}

std::pair<double, double> fluctuation_bounds(const CovarianceEstimate &est) {
    const double e2 = est.e.squaredNorm();
    if (e2 <= 0) {
        throw std::invalid_argument("zero rate vector");
    }
    const double quad = std::max(0.0, est.e.dot(est.k * est.e));
    return {std::sqrt(est.eta * quad) / e2, std::sqrt(est.eta * std::max(0.0, est.k.trace())) / std::sqrt(e2)};
}

double predicted_rmse(const CovarianceEstimate &est, const Eigen::VectorXd &q) {
    const double bias = est.e.dot(q) - 1;
    return std::sqrt(est.eta * (bias * bias + q.dot(est.k * q)));
}

std::string formula_name(const MitigationFormula &f) {
    static const char *names[] = {"pemi_basic", "pemi_optimal", "linear_extrapolation", "richardson",
                                  "pec_inverse", "virtual_distillation", "vd_pemi"};
    return names[f.index()];
}

double apply_formula(const MitigationFormula &f, const std::vector<double> &inputs) {
    struct Visitor {
        const std::vector<double> &in;
        std::string name;
        void need(size_t k) const {
            if (in.size() != k) throw std::invalid_argument(name + ": wrong number of inputs");
        }
        double operator()(const PemiBasic &p) const {
            need(1);
            return pemi_factor(p.epsilon0, 0, false) * in[0];
        }
        double operator()(const PemiOptimal &p) const {
            need(1);
            return pemi_factor(p.epsilon0, p.delta, true) * in[0];
        }
        double operator()(const LinearExtrapolation &p) const {
            need(2);
            return extrapolate_linear(in[0], in[1], p.lambda);
        }
        double operator()(const Richardson &p) const {
            need(p.q.size());
            return richardson_extrapolate(in, p.q);
        }
        double operator()(const PecInverse &) const {
            need(1);
            return in[0];
        }
        double operator()(const VirtualDistillation &) const {
            need(2);
            return virtual_distillation_ratio(in[0], in[1]);
        }
        double operator()(const VdPemi &p) const {
            need(2);
            return vd_pemi(virtual_distillation_ratio(in[0], in[1]), p.epsilon0_prime);
        }
    };
    return std::visit(Visitor{inputs, formula_name(f)}, f);
}

nlohmann::json formula_to_json(const MitigationFormula &f) {
    nlohmann::json j;
    j["kind"] = formula_name(f);
    if (auto *p = std::get_if<PemiBasic>(&f)) {
        j["epsilon0"] = p->epsilon0;
    } else if (auto *p = std::get_if<PemiOptimal>(&f)) {
        j["epsilon0"] = p->epsilon0;
        j["delta"] = p->delta;
    } else if (auto *p = std::get_if<LinearExtrapolation>(&f)) {
        j["lambda"] = p->lambda;
    } else if (auto *p = std::get_if<Richardson>(&f)) {
        j["r"] = p->r;
        j["q"] = p->q;
    } else if (auto *p = std::get_if<PecInverse>(&f)) {
        j["lambda"] = p->lambda;
    } else if (auto *p = std::get_if<VdPemi>(&f)) {
        j["epsilon0_prime"] = p->epsilon0_prime;
    }
    return j;
}

MitigationFormula formula_from_json(const nlohmann::json &j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "pemi_basic") return PemiBasic{j.at("epsilon0").get<double>()};
        if (kind == "pemi_optimal") return PemiOptimal{j.at("epsilon0").get<double>(), j.at("delta").get<double>()};
        if (kind == "linear_extrapolation") return LinearExtrapolation{j.at("lambda").get<double>()};
        if (kind == "richardson") {
            Richardson r{j.at("r").get<std::vector<double>>(), {}};
            r.q = j.contains("q") ? j.at("q").get<std::vector<double>>()
                                  : richardson_coefficients(r.r, r.r.size() - 1);
            if (r.q.size() != r.r.size()) throw std::invalid_argument("richardson: r and q differ in length");
            return r;
        }
        if (kind == "pec_inverse") return PecInverse{j.at("lambda").get<double>()};
        if (kind == "virtual_distillation") return VirtualDistillation{};
        if (kind == "vd_pemi") return VdPemi{j.at("epsilon0_prime").get<double>()};
        throw std::invalid_argument("unknown formula kind: " + kind);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("malformed formula: ") + e.what());
    }
}

}  // namespace qem
