#pragma once

// Canonical fluctuation pairs built from the gauge generators Q_+ and Q_-.
//
// For spectral projections P_i of h_lambda and a one-site observable A:
//   E_ij(A)  = P_i A P_j + P_j A P_i
//   JE_ij(A) = i (P_i A P_j - P_j A P_i)
// The four non-vanishing pairs are (02, Q_-), (13, Q_+), (03, Q_-), (12, Q_+).
// A pair is normalized as X = s E / n, P = JE / n with s = -1 for 02 and 12.
// All fluctuation-level statements are evaluated through one-site traces
// (two-point functions and commutator expectations).

#include <array>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "hcboson/operator_algebra.hpp"

namespace hcb {

enum class PairId { p02, p13, p03, p12 };
enum class FrequencyClass { xi_plus, xi_minus };

struct PairInfo {
  PairId id;
  std::string_view label;
  int i;
  int j;
  Generator generator;
  FrequencyClass frequency;
  /// Sign of X relative to E/n.
  int x_sign;
  /// sign(eps_i - eps_j): [h, E] = -i gap_sign xi JE and [h, JE] = i gap_sign xi E.
  int gap_sign;
  /// What P measures: the adjoint order parameter for the xi_+ pairs; the
  /// total and relative particle currents for 03 and 12.
  std::string_view p_meaning;
};

inline constexpr std::array<PairInfo, 4> kPairs{{
    {PairId::p02, "02", 0, 2, Generator::q_minus, FrequencyClass::xi_plus, -1, -1, "order_parameter"},
    {PairId::p13, "13", 1, 3, Generator::q_plus, FrequencyClass::xi_plus, +1, +1, "order_parameter"},
    {PairId::p03, "03", 0, 3, Generator::q_minus, FrequencyClass::xi_minus, +1, +1, "total_current"},
    {PairId::p12, "12", 1, 2, Generator::q_plus, FrequencyClass::xi_minus, -1, -1, "relative_current"},
}};

const PairInfo& pair_info(PairId id);

struct PlasmonFrequencies {
  double xi_plus = 0.0;   // eta + U
  double xi_minus = 0.0;  // eta - U
};
PlasmonFrequencies plasmon_frequencies(const ModelParams& params, double lambda_mod);

/// hbar_+ = (4 xi_-/eta) tanh(beta xi_+/2), hbar_- = (4 xi_+/eta) tanh(beta xi_-/2).
/// Infinite beta gives the tanh -> 1 limit.
double quantisation_parameter(const ModelParams& params, double lambda_mod, FrequencyClass cls);

struct FluctuationPair {
  PairInfo info;
  /// n^2 = (Gibbs weight of slot i) + (Gibbs weight of slot j).
  double n = 0.0;
  double hbar = 0.0;
  /// Common variance of X and P: 2 xi_-/eta for the xi_+ pairs, 2 xi_+/eta otherwise.
  double variance = 0.0;
  double frequency = 0.0;
  Operator E;
  Operator JE;
  /// lambda = 0: the pair does not exist as a quantum mode; the scalar fields
  /// hold the lambda -> 0 limits.
  bool degenerate = false;
};

std::pair<Operator, Operator> build_EJE(int i, int j, const Operator& a,
                                        const OneSiteSpectrum& spectrum);

/// Everything needed to examine the fluctuations at one mean-field point.
struct FluctuationAnalysis {
  ModelParams params;
  double lambda_mod = 0.0;
  double eta = 0.0;
  PlasmonFrequencies xi;
  OneSiteSpectrum spectrum;
  Operator h;
  Operator rho;
  std::array<FluctuationPair, 4> pairs;
};

/// Builds h_lambda, rho_lambda and the four pairs at real lambda_mod >= 0.
/// Requires finite beta.
FluctuationAnalysis analyze_fluctuations(const ModelParams& params, double lambda_mod);

FluctuationPair build_pair(const ModelParams& params, double lambda_mod, PairId id);

/// max of || [h, E] + i s xi JE || and || [h, JE] - i s xi E || (max-entry norm).
double commutator_dynamics_check(const FluctuationPair& pair, const Operator& h);

/// omega([E, JE]) = Tr(rho [E, JE]).
Complex ccr_parameter(const FluctuationPair& pair, const Operator& rho);

/// The value omega([E, JE]) must take for [X, P] = i hbar: i * gap_sign * n^2 * hbar.
Complex expected_ccr(const FluctuationPair& pair);

struct Variances {
  double x = 0.0;
  double p = 0.0;
};
/// Tr(rho E^2)/n^2 and Tr(rho JE^2)/n^2.
Variances variance(const FluctuationPair& pair, const Operator& rho);

/// (X(t), P(t)) = R (X(0), P(0)) with R = [[cos, sin], [-sin, cos]] at the pair frequency.
struct Rotation2 {
  double c = 1.0;
  double s = 0.0;
  Eigen::Matrix2d matrix() const;
  std::pair<double, double> apply(double x, double p) const { return {c * x + s * p, -s * x + c * p}; }
};
Rotation2 evolve(const FluctuationPair& pair, double time);

/// Heisenberg-evolves E and JE with exp(+-i h t) (numeric eigenbasis of h) and
/// compares x_sign E(t) / n and JE(t) / n with the closed rotation.
double evolution_residual(const FluctuationPair& pair, const Operator& h, double time);

/// Second moments omega(A_a A_b) over the eight operators
/// (E_02, JE_02, E_13, JE_13, E_03, JE_03, E_12, JE_12).
struct IndependenceTable {
  Eigen::Matrix<Complex, 8, 8> moments;
  /// max |omega(A B)| for A, B from different pairs.
  double max_cross_moment = 0.0;
  /// min omega((A - B)^2) over A, B from different pairs.
  double min_distance = 0.0;
  /// max |omega((A - B)^2) - omega(A^2) - omega(B^2)| over different pairs.
  double max_distance_defect = 0.0;
  /// max |omega(A)| over all eight operators.
  double max_mean = 0.0;
};
IndependenceTable independence_matrix(const std::array<FluctuationPair, 4>& pairs, const Operator& rho);

}  // namespace hcb
