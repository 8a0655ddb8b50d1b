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

#include "qemics/noise.h"

#include <cmath>
#include <stdexcept>

namespace qem {

namespace {

using cd = std::complex<double>;

int num_paulis(int arity) { return arity == 1 ? 4 : 16; }

MatX superop_from_kraus(int d, const std::vector<MatX> &kraus) {
    MatX s = MatX::Zero(d * d, d * d);
    for (const MatX &k : kraus) {
        for (int r2 = 0; r2 < d; r2++)
            for (int c2 = 0; c2 < d; c2++)
                for (int r = 0; r < d; r++)
                    for (int c = 0; c < d; c++)
                        s(r2 * d + c2, r * d + c) += k(r2, r) * std::conj(k(c2, c));
    }
    return s;
}

MatX apply_superop(const MatX &s, const MatX &m) {
    const auto d = m.rows();
    Eigen::VectorXcd v(d * d);
    for (int r = 0; r < d; r++)
        for (int c = 0; c < d; c++) v(r * d + c) = m(r, c);
    Eigen::VectorXcd out = s * v;
    MatX res(d, d);
    for (int r = 0; r < d; r++)
        for (int c = 0; c < d; c++) res(r, c) = out(r * d + c);
    return res;
}

void check_rate(double value, double hi, const char *what) {
    if (!(value >= 0.0 && value <= hi)) {
        throw std::invalid_argument(std::string(what) + " out of range");
    }
}

}  // namespace

MatX local_pauli_matrix(int arity, int index) {
    if (arity == 1) {
        return pauli_matrix(static_cast<Pauli>(index));
    }
    Mat2 a = pauli_matrix(static_cast<Pauli>(index & 3));
    Mat2 b = pauli_matrix(static_cast<Pauli>(index >> 2));
    MatX m(4, 4);
    for (int a1 = 0; a1 < 2; a1++)
        for (int b1 = 0; b1 < 2; b1++)
            for (int a2 = 0; a2 < 2; a2++)
                for (int b2 = 0; b2 < 2; b2++) m(a1 + 2 * b1, a2 + 2 * b2) = a(a1, a2) * b(b1, b2);
    return m;
}

PauliString local_pauli_string(int arity, int index) {
    PauliString p(arity);
    p.set(0, static_cast<Pauli>(index & 3));
    if (arity == 2) {
        p.set(1, static_cast<Pauli>(index >> 2));
    }
    return p;
}

bool local_anticommute(int, int a, int b) {
    // Per qubit: x_a z_b + z_a x_b, with x in even bits and z in odd bits.
    unsigned xa = a & 0b0101, za = (a >> 1) & 0b0101;
    unsigned xb = b & 0b0101, zb = (b >> 1) & 0b0101;
    return std::popcount((xa & zb) ^ (za & xb)) & 1;
}

Channel Channel::identity(int arity) {
    std::vector<double> probs(num_paulis(arity), 0.0);
    probs[0] = 1.0;
    return from_pauli(arity, std::move(probs));
}

Channel Channel::from_kraus(int arity, std::vector<MatX> kraus) {
    Channel c;
    c.arity_ = arity;
    c.kraus_ = std::move(kraus);
    c.superop_ = superop_from_kraus(c.dim(), c.kraus_);
    // Detect a Pauli channel: diagonal Pauli transfer matrix.
    const int np = num_paulis(arity);
    std::vector<double> eig(np);
    bool diagonal = true;
    for (int q = 0; q < np && diagonal; q++) {
        MatX pq = local_pauli_matrix(arity, q);
        MatX image = apply_superop(c.superop_, pq);
        eig[q] = (pq * image).trace().real() / c.dim();
        diagonal = (image - eig[q] * pq).cwiseAbs().maxCoeff() < 1e-13;
    }
    if (diagonal) {
        std::vector<double> probs(np, 0.0);
        for (int p = 0; p < np; p++) {
            for (int q = 0; q < np; q++) {
                probs[p] += (local_anticommute(arity, p, q) ? -1.0 : 1.0) * eig[q];
            }
            probs[p] /= np;
        }
        c.pauli_probs_ = std::move(probs);
    }
    return c;
}

Channel Channel::from_pauli(int arity, std::vector<double> probs, bool completely_positive) {
    if (arity != 1 && arity != 2) {
        throw std::invalid_argument("channels act on one or two qubits");
    }
    if (static_cast<int>(probs.size()) != num_paulis(arity)) {
        throw std::invalid_argument("Pauli probability vector has the wrong length");
    }
    Channel c;
    c.arity_ = arity;
    c.cp_ = completely_positive;
    const int d = c.dim();
    c.superop_ = MatX::Zero(d * d, d * d);
    for (int p = 0; p < num_paulis(arity); p++) {
        if (probs[p] == 0.0) {
            continue;
        }
        MatX pm = local_pauli_matrix(arity, p);
        if (completely_positive) {
            if (probs[p] < 0) {
                throw std::invalid_argument("negative probability in a completely positive Pauli channel");
            }
            c.kraus_.push_back(std::sqrt(probs[p]) * pm);
        }
        c.superop_ += probs[p] * superop_from_kraus(d, {pm});
    }
    c.pauli_probs_ = std::move(probs);
    return c;
}

Channel Channel::from_unitary(const MatX &u) {
    const int arity = u.rows() == 2 ? 1 : 2;
    return from_kraus(arity, {u});
}

std::vector<std::pair<PauliString, double>> Channel::pauli_form() const {
    if (!is_pauli()) {
        throw std::logic_error("channel has no Pauli form");
    }
    std::vector<std::pair<PauliString, double>> out;
    for (int p = 1; p < num_paulis(arity_); p++) {
        if ((*pauli_probs_)[p] != 0.0) {
            out.emplace_back(local_pauli_string(arity_, p), (*pauli_probs_)[p]);
        }
    }
    return out;
}

double Channel::pauli_eigenvalue(int local_index) const {
    if (pauli_probs_) {
        double lambda = 0;
        for (int p = 0; p < num_paulis(arity_); p++) {
            lambda += (local_anticommute(arity_, p, local_index) ? -1.0 : 1.0) * (*pauli_probs_)[p];
        }
        return lambda;
    }
    MatX pq = local_pauli_matrix(arity_, local_index);
    return (pq * apply_superop(superop_, pq)).trace().real() / dim();
}

double Channel::trace_preservation_error() const {
    // Trace preservation of the superoperator: sum_r S[(r,r), (a,b)] = delta_ab.
    const int d = dim();
    double worst = 0;
    for (int a = 0; a < d; a++) {
        for (int b = 0; b < d; b++) {
            cd sum = 0;
            for (int r = 0; r < d; r++) {
                sum += superop_(r * d + r, a * d + b);
            }
            worst = std::max(worst, std::abs(sum - cd(a == b ? 1.0 : 0.0)));
        }
    }
    if (!kraus_.empty()) {
        MatX acc = MatX::Zero(d, d);
        for (const MatX &k : kraus_) {
            acc += k.adjoint() * k;
        }
        worst = std::max(worst, (acc - MatX::Identity(d, d)).cwiseAbs().maxCoeff());
    }
    return worst;
}

Channel Channel::after(const Channel &first) const {
    if (first.arity_ != arity_) {
        throw std::invalid_argument("cannot compose channels of different arity");
    }
    if (is_pauli() && first.is_pauli() && !(cp_ && first.cp_ && (kraus_.empty() || first.kraus_.empty()))) {
        const int np = num_paulis(arity_);
        std::vector<double> probs(np, 0.0);
        for (int a = 0; a < np; a++)
            for (int b = 0; b < np; b++) probs[a ^ b] += (*pauli_probs_)[a] * (*first.pauli_probs_)[b];
        if (cp_ && first.cp_) {
            return from_pauli(arity_, std::move(probs), true);
        }
        Channel c = from_pauli(arity_, std::move(probs), false);
        return c;
    }
    if (is_pauli() && first.is_pauli()) {
        const int np = num_paulis(arity_);
        std::vector<double> probs(np, 0.0);
        for (int a = 0; a < np; a++)
            for (int b = 0; b < np; b++) probs[a ^ b] += (*pauli_probs_)[a] * (*first.pauli_probs_)[b];
        bool nonneg = true;
        for (double p : probs) nonneg = nonneg && p >= 0;
        return from_pauli(arity_, std::move(probs), cp_ && first.cp_ && nonneg);
    }
    if (!cp_ || !first.cp_) {
        // Non-CP maps only exist in Pauli form; compose as superoperators.
        Channel c;
        c.arity_ = arity_;
        c.cp_ = false;
        c.superop_ = superop_ * first.superop_;
        return c;
    }
    std::vector<MatX> kraus;
    kraus.reserve(kraus_.size() * first.kraus_.size());
    for (const MatX &a : kraus_) {
        for (const MatX &b : first.kraus_) {
            kraus.push_back(a * b);
        }
    }
    return from_kraus(arity_, std::move(kraus));
}

Channel gate_depolarising(double epsilon) {
    check_rate(epsilon, 15.0 / 16.0, "gate depolarising rate");
    std::vector<double> probs(16, epsilon / 15.0);
    probs[0] = 1.0 - epsilon;
    return Channel::from_pauli(2, std::move(probs));
}

double product_form_probability(double epsilon, bool exact) {
    check_rate(epsilon, 15.0 / 16.0, "gate depolarising rate");
    if (!exact) {
        return epsilon / 15.0;
    }
    // Every non-identity two-qubit Pauli anticommutes with exactly 8 of the 15 factors.
    return 0.5 * (1.0 - std::pow(1.0 - 16.0 * epsilon / 15.0, 1.0 / 8.0));
}

Channel gate_depolarising_product(double p) {
    check_rate(p, 0.5, "Pauli channel probability");
    std::vector<double> probs(16, 0.0);
    probs[0] = 1.0;
    for (int k = 1; k < 16; k++) {
        std::vector<double> next(16, 0.0);
        for (int a = 0; a < 16; a++) {
            next[a] += (1 - p) * probs[a];
            next[a ^ k] += p * probs[a];
        }
        probs = std::move(next);
    }
    return Channel::from_pauli(2, std::move(probs));
}

Channel dephasing(double epsilon) {
    check_rate(epsilon, 1.0, "dephasing rate");
    return Channel::from_pauli(1, {1.0 - epsilon, 0.0, epsilon, 0.0});
}

Channel amplitude_damping(double gamma) {
    check_rate(gamma, 1.0, "amplitude damping rate");
    MatX k0 = MatX::Zero(2, 2);
    k0(0, 0) = 1;
    k0(1, 1) = std::sqrt(1 - gamma);
    MatX k1 = MatX::Zero(2, 2);
    k1(0, 1) = std::sqrt(gamma);
    return Channel::from_kraus(1, {k0, k1});
}

Channel embed_single(const Channel &c, int which) {
    if (c.arity() != 1) {
        throw std::invalid_argument("embed_single expects a single-qubit channel");
    }
    if (c.is_pauli() && c.completely_positive()) {
        std::vector<double> probs(16, 0.0);
        for (int p = 0; p < 4; p++) {
            probs[which == 0 ? p : 4 * p] = c.pauli_probs()[p];
        }
        return Channel::from_pauli(2, std::move(probs));
    }
    std::vector<MatX> kraus;
    MatX id = MatX::Identity(2, 2);
    for (const MatX &k : c.kraus()) {
        MatX m(4, 4);
        const MatX &first = which == 0 ? k : id;
        const MatX &second = which == 0 ? id : k;
        for (int a1 = 0; a1 < 2; a1++)
            for (int b1 = 0; b1 < 2; b1++)
                for (int a2 = 0; a2 < 2; a2++)
                    for (int b2 = 0; b2 < 2; b2++) m(a1 + 2 * b1, a2 + 2 * b2) = first(a1, a2) * second(b1, b2);
        kraus.push_back(std::move(m));
    }
    return Channel::from_kraus(2, std::move(kraus));
}

Channel depol_dephase(double eps_d, double eps_z) {
    Channel z = dephasing(eps_z);
    return embed_single(z, 1).after(embed_single(z, 0).after(gate_depolarising(eps_d)));
}

Channel single_qubit_depolarising(double eps_s) {
    check_rate(eps_s, 0.75, "single-qubit depolarising rate");
    return Channel::from_pauli(1, {1.0 - eps_s, eps_s / 3, eps_s / 3, eps_s / 3});
}

double gate_dependent_rate(const Mat2 &r, double epsilon) {
    double half_trace = std::abs(r.trace()) / 2.0;
    if (half_trace > 1.0 + 1e-9) {
        throw std::invalid_argument("|Tr R| / 2 exceeds 1; gate is not unitary");
    }
    half_trace = std::min(half_trace, 1.0);
    return 0.1 / M_PI * epsilon * std::acos(half_trace);
}

Channel gate_dependent_single(const Mat2 &r, double epsilon) {
    return single_qubit_depolarising(gate_dependent_rate(r, epsilon));
}

Channel depolarising_inverse_map(double lambda) {
    std::vector<double> probs(16, lambda / 16.0);
    probs[0] = 1.0 - lambda + lambda / 16.0;
    return Channel::from_pauli(2, std::move(probs), lambda >= 0 && lambda <= 1);
}

CompositeParams CompositeParams::scaled(double r) const {
    CompositeParams out = *this;
    out.eps_d *= r;
    for (int i = 0; i < 2; i++) {
        out.eps_z[i] *= r;
        out.eps_a[i] *= r;
        for (int k = 0; k < 3; k++) {
            out.theta[i][k] *= r;
        }
    }
    return out;
}

Channel composite_channel(const CompositeParams &params) {
    Channel c = gate_depolarising(params.eps_d);
    for (int i = 0; i < 2; i++) {
        c = embed_single(dephasing(params.eps_z[i]), i).after(c);
    }
    for (int i = 0; i < 2; i++) {
        // R_Z R_Y R_X: the X rotation acts first.
        Mat2 u = Mat2::Identity();
        for (int k = 0; k < 3; k++) {
            Pauli axis = k == 0 ? Pauli::X : (k == 1 ? Pauli::Y : Pauli::Z);
            const double t = params.theta[i][k];
            Mat2 rot = std::cos(t / 2) * Mat2::Identity() - cd(0, 1) * std::sin(t / 2) * pauli_matrix(axis);
            u = rot * u;
        }
        c = embed_single(Channel::from_unitary(u), i).after(c);
    }
    for (int i = 0; i < 2; i++) {
        c = embed_single(amplitude_damping(params.eps_a[i]), i).after(c);
    }
    return c;
}

CompositeParams sample_composite_params(double epsilon, Rng &rng) {
    auto kappa = [&rng] { return uniform(rng, -1.0, 1.0); };
    CompositeParams p;
    p.eps_d = (1 + 0.2 * kappa()) * epsilon / 9;
    for (int i = 0; i < 2; i++) {
        p.eps_z[i] = (1 + 0.2 * kappa()) * epsilon / 9;
    }
    for (int i = 0; i < 2; i++) {
        for (int k = 0; k < 3; k++) {
            p.theta[i][k] = kappa() * epsilon / 9;
        }
    }
    for (int i = 0; i < 2; i++) {
        p.eps_a[i] = (1 + 0.2 * kappa()) * epsilon / 6;
    }
    return p;
}

TotalErrorRate sample_total_error_rate(size_t gate_count, Rng &rng) {
    if (gate_count < 1) {
        throw std::invalid_argument("gate count must be positive");
    }
    double u = uniform(rng, -2.5, -0.5);
    return {std::pow(10.0, u) / static_cast<double>(gate_count), u};
}

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::None:
            return "none";
        case NoiseKind::GateDepolarising:
            return "gate_depolarising";
        case NoiseKind::Composite:
            return "composite";
        case NoiseKind::GateDependent:
            return "gate_dependent";
        case NoiseKind::DepolDephase:
            return "depol_dephase";
        case NoiseKind::GlobalDepolarising:
            return "global_depolarising";
    }
    return "unknown";
}

NoiseKind noise_kind_from_string(const std::string &name) {
    for (NoiseKind k : {NoiseKind::None, NoiseKind::GateDepolarising, NoiseKind::Composite, NoiseKind::GateDependent,
                        NoiseKind::DepolDephase, NoiseKind::GlobalDepolarising}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown noise model: " + name);
}

NoiseModel NoiseModel::gate_depolarising(double epsilon, double r) {
    NoiseModel m;
    m.kind = NoiseKind::GateDepolarising;
    m.epsilon = epsilon;
    m.r = r;
    m.validate();
    return m;
}

NoiseModel NoiseModel::depol_dephase(double eps_d, double eps_z, double r) {
    NoiseModel m;
    m.kind = NoiseKind::DepolDephase;
    m.eps_d = eps_d;
    m.eps_z = eps_z;
    m.r = r;
    m.validate();
    return m;
}

NoiseModel NoiseModel::composite_model(const CompositeParams &p, double r) {
    NoiseModel m;
    m.kind = NoiseKind::Composite;
    m.composite = p;
    m.r = r;
    m.validate();
    return m;
}

NoiseModel NoiseModel::gate_dependent(double epsilon, double r) {
    NoiseModel m;
    m.kind = NoiseKind::GateDependent;
    m.epsilon = epsilon;
    m.r = r;
    m.validate();
    return m;
}

NoiseModel NoiseModel::global_depolarising(double epsilon, double r) {
    NoiseModel m;
    m.kind = NoiseKind::GlobalDepolarising;
    m.epsilon = epsilon;
    m.r = r;
    m.validate();
    return m;
}

NoiseModel NoiseModel::amplified(double factor) const {
    NoiseModel m = *this;
    m.r *= factor;
    m.validate();
    return m;
}

bool NoiseModel::noiseless() const {
    switch (kind) {
        case NoiseKind::None:
            return true;
        case NoiseKind::GateDepolarising:
        case NoiseKind::GateDependent:
        case NoiseKind::GlobalDepolarising:
            return epsilon * r == 0;
        case NoiseKind::DepolDephase:
            return (eps_d + eps_z) * r == 0;
        case NoiseKind::Composite:
            return composite.scaled(r) == CompositeParams{};
    }
    return false;
}

bool NoiseModel::composite_is_pauli() const {
    for (int i = 0; i < 2; i++) {
        if (composite.eps_a[i] != 0) return false;
        for (int k = 0; k < 3; k++) {
            if (composite.theta[i][k] != 0) return false;
        }
    }
    return true;
}

void NoiseModel::validate() const {
    if (!(r > 0)) {
        throw std::invalid_argument("amplification factor must be positive");
    }
    switch (kind) {
        case NoiseKind::None:
            break;
        case NoiseKind::GateDepolarising:
        case NoiseKind::GateDependent:
            check_rate(epsilon * r, 15.0 / 16.0, "gate depolarising rate");
            break;
        case NoiseKind::GlobalDepolarising:
            check_rate(epsilon * r, 1.0, "global depolarising rate");
            break;
        case NoiseKind::DepolDephase:
            check_rate(eps_d * r, 15.0 / 16.0, "gate depolarising rate");
            check_rate(eps_z * r, 1.0, "dephasing rate");
            break;
        case NoiseKind::Composite: {
            CompositeParams s = composite.scaled(r);
            check_rate(s.eps_d, 15.0 / 16.0, "gate depolarising rate");
            for (int i = 0; i < 2; i++) {
                check_rate(s.eps_z[i], 1.0, "dephasing rate");
                check_rate(s.eps_a[i], 1.0, "amplitude damping rate");
                for (int k = 0; k < 3; k++) {
                    if (!std::isfinite(s.theta[i][k])) {
                        throw std::invalid_argument("rotation angle must be finite");
                    }
                }
            }
            break;
        }
    }
}

namespace {
Channel depolarising_part(double eps, const NoiseModel &m) {
    if (m.product_form) {
        return gate_depolarising_product(product_form_probability(eps, m.exact_product_rate));
    }
    return gate_depolarising(eps);
}
}  // namespace

Channel NoiseModel::two_qubit_channel() const {
    switch (kind) {
        case NoiseKind::None:
        case NoiseKind::GlobalDepolarising:
            return Channel::identity(2);
        case NoiseKind::GateDepolarising:
        case NoiseKind::GateDependent:
            return depolarising_part(epsilon * r, *this);
        case NoiseKind::DepolDephase: {
            Channel z = dephasing(eps_z * r);
            return embed_single(z, 1).after(embed_single(z, 0).after(depolarising_part(eps_d * r, *this)));
        }
        case NoiseKind::Composite:
            return composite_channel(composite.scaled(r));
    }
    throw std::logic_error("unknown noise kind");
}

std::optional<Channel> NoiseModel::slot_channel(const Mat2 &r_gate) const {
    if (!has_slot_noise()) {
        return std::nullopt;
    }
    return gate_dependent_single(r_gate, epsilon * r);
}

std::vector<std::pair<int, double>> NoiseModel::product_factors() const {
    std::vector<std::pair<int, double>> out;
    auto add_depolarising = [&](double eps) {
        // Summation-form models use the eigenvalue-matched probability, which reproduces them exactly.
        double p = product_form_probability(eps, product_form ? exact_product_rate : true);
        for (int k = 1; k < 16; k++) {
            out.emplace_back(k, p);
        }
    };
    switch (kind) {
        case NoiseKind::None:
            break;
        case NoiseKind::GateDepolarising:
            add_depolarising(epsilon * r);
            break;
        case NoiseKind::DepolDephase:
            add_depolarising(eps_d * r);
            out.emplace_back(static_cast<int>(Pauli::Z), eps_z * r);
            out.emplace_back(4 * static_cast<int>(Pauli::Z), eps_z * r);
            break;
        default:
            throw std::invalid_argument("noise model has no product form: " + to_string(kind));
    }
    return out;
}

}  // namespace qem
