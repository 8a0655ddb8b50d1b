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

#ifndef QEMICS_NOISE_H
#define QEMICS_NOISE_H

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qemics/clifford.h"
#include "qemics/pauli.h"
#include "qemics/rng.h"

namespace qem {

using MatX = Eigen::MatrixXcd;

/// Matrix of the local Pauli with index `index` on `arity` qubits. For arity 2 the index is
/// first + 4 * second (Pauli encoding) and the matrix uses the basis |b_first + 2 b_second>.
MatX local_pauli_matrix(int arity, int index);
/// Local Pauli index -> PauliString on `arity` qubits.
PauliString local_pauli_string(int arity, int index);
/// True when local Paulis a and b anticommute.
bool local_anticommute(int arity, int a, int b);

/// A one- or two-qubit noise map.
///
/// Physical channels carry a Kraus set. Pauli maps additionally carry their Pauli
/// probabilities (indexed by local Pauli index); maps built from quasi-probabilities
/// such as the PEC inverse carry only the Pauli form and are flagged non-CP.
class Channel {
   public:
    static Channel identity(int arity);
    static Channel from_kraus(int arity, std::vector<MatX> kraus);
    /// Pauli map sum_P probs[P] [P]. Probabilities may be negative when completely_positive is false.
    static Channel from_pauli(int arity, std::vector<double> probs, bool completely_positive = true);
    static Channel from_unitary(const MatX &u);

    int arity() const { return arity_; }
    int dim() const { return 1 << arity_; }
    bool completely_positive() const { return cp_; }
    const std::vector<MatX> &kraus() const { return kraus_; }
    bool is_pauli() const { return pauli_probs_.has_value(); }
    const std::vector<double> &pauli_probs() const { return *pauli_probs_; }
    /// Non-identity (PauliString, probability) pairs of a Pauli channel.
    std::vector<std::pair<PauliString, double>> pauli_form() const;

    /// Superoperator acting on row-major vec(rho) of the local block.
    const MatX &superoperator() const { return superop_; }
    /// Pauli transfer eigenvalue: the factor applied to a Heisenberg-picture Pauli `local_index`.
    double pauli_eigenvalue(int local_index) const;

    /// Product of Kraus sums (trace preservation residual, max-abs of sum K^dagger K - I).
    double trace_preservation_error() const;

    /// this o first (apply `first`, then this).
    Channel after(const Channel &first) const;

   private:
    int arity_ = 1;
    bool cp_ = true;
    std::vector<MatX> kraus_;
    std::optional<std::vector<double>> pauli_probs_;
    MatX superop_;
};

/// Summation-form gate depolarising channel (1 - 16e/15)[I] + (16e/15) D_{1,2}.
Channel gate_depolarising(double epsilon);
/// Per-channel probability for the 15-factor product form. `exact` matches the summation
/// form's Pauli eigenvalues, otherwise the first-order value epsilon / 15 is returned.
double product_form_probability(double epsilon, bool exact);
/// Product of the 15 channels (1-p)[I] + p[P], P a non-identity two-qubit Pauli.
Channel gate_depolarising_product(double p);
/// Single-qubit dephasing (1 - e)[I] + e[Z].
Channel dephasing(double epsilon);
/// Single-qubit amplitude damping with decay probability `gamma`.
Channel amplitude_damping(double gamma);
/// Z_2 Z_1 N with N gate depolarising at eps_d and Z_i dephasing at eps_z.
Channel depol_dephase(double eps_d, double eps_z);
/// Single-qubit depolarising (1 - 4e/3)[I] + (e/3) sum_{P in I,X,Y,Z} [P].
Channel single_qubit_depolarising(double eps_s);
/// eps_s = 0.1 / pi * epsilon * arccos(|Tr R| / 2).
double gate_dependent_rate(const Mat2 &r, double epsilon);
Channel gate_dependent_single(const Mat2 &r, double epsilon);
/// Inverse-noise map (1 - lambda)[I] + lambda D_{1,2}; not completely positive for lambda < 0.
Channel depolarising_inverse_map(double lambda);

/// Lift a single-qubit channel to act on one qubit of a pair (`which` = 0 or 1).
Channel embed_single(const Channel &c, int which);

struct CompositeParams {
    double eps_d = 0;
    std::array<double, 2> eps_z{};
    /// theta[i][k] rotation angle on qubit i about X, Y, Z (k = 0, 1, 2).
    std::array<std::array<double, 3>, 2> theta{};
    std::array<double, 2> eps_a{};

    CompositeParams scaled(double r) const;
    bool operator==(const CompositeParams &) const = default;
};

/// A_2 A_1 [R_2] [R_1] Z_2 Z_1 N, composed in that order (N applied first).
Channel composite_channel(const CompositeParams &params);
/// eps_d = (1 + 0.2 k) e / 9, eps_z = (1 + 0.2 k) e / 9, theta = k e / 9, eps_a = (1 + 0.2 k) e / 6,
/// each k uniform in [-1, 1].
CompositeParams sample_composite_params(double epsilon, Rng &rng);

/// Per-gate rate e = 10^u / N with u uniform in [-2.5, -0.5]; also returns u.
struct TotalErrorRate {
    double epsilon;
    double log10_total;
};
TotalErrorRate sample_total_error_rate(size_t gate_count, Rng &rng);

enum class NoiseKind { None, GateDepolarising, Composite, GateDependent, DepolDephase, GlobalDepolarising };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string &name);

/// Per-gate noise assignment for a frame. Only two-qubit gates are noisy except under
/// GateDependent, where slot gates carry a single-qubit depolarising channel too.
struct NoiseModel {
    NoiseKind kind = NoiseKind::None;
    double epsilon = 0;  ///< GateDepolarising, GateDependent, GlobalDepolarising
    double eps_d = 0;    ///< DepolDephase
    double eps_z = 0;    ///< DepolDephase
    CompositeParams composite;
    /// Noise amplification factor; every first-order rate is multiplied by r.
    double r = 1;
    /// Use the 15-factor product form for the gate depolarising part.
    bool product_form = false;
    /// With product_form: exact eigenvalue-matched per-channel probability instead of e/15.
    bool exact_product_rate = false;

    static NoiseModel none() { return {}; }
    static NoiseModel gate_depolarising(double epsilon, double r = 1);
    static NoiseModel depol_dephase(double eps_d, double eps_z, double r = 1);
    static NoiseModel composite_model(const CompositeParams &p, double r = 1);
    static NoiseModel gate_dependent(double epsilon, double r = 1);
    static NoiseModel global_depolarising(double epsilon, double r = 1);

    /// Same model with amplification r' = factor * r.
    NoiseModel amplified(double factor) const;

    bool noiseless() const;
    bool is_pauli() const { return kind != NoiseKind::Composite || composite_is_pauli(); }
    bool is_global() const { return kind == NoiseKind::GlobalDepolarising; }
    bool has_slot_noise() const { return kind == NoiseKind::GateDependent && epsilon * r > 0; }

    /// Local channel applied after every two-qubit gate (not used for GlobalDepolarising).
    Channel two_qubit_channel() const;
    /// Channel after a slot gate with matrix `r_gate`, if the model makes slots noisy.
    std::optional<Channel> slot_channel(const Mat2 &r_gate) const;
    /// Global depolarising rate per two-qubit gate (GlobalDepolarising only).
    double global_rate() const { return epsilon * r; }

    /// Product-form factors after a two-qubit gate: local two-qubit Pauli index and probability.
    /// Throws std::invalid_argument if the model has no product form.
    std::vector<std::pair<int, double>> product_factors() const;

    void validate() const;

   private:
    bool composite_is_pauli() const;
};

}  // namespace qem

#endif
