#include "hcboson/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hcboson/operator_algebra.hpp"

namespace hcb {
namespace {

void require_physical(const ModelParams& params) {
  if (!params.physical()) {
    throw InvalidRegime("the gap equation has no non-trivial solution for t >= 0 (t = " +
                        std::to_string(params.t) + ")");
  }
}

double raw_f_beta(double eta, double t, double U, double beta) {
  if (t == 0.0) return 0.0;
  const double m = beta * std::max(eta, std::abs(U));
  const double ep = std::exp(beta * eta - m);
  const double em = std::exp(-beta * eta - m);
  // exp(-m) 2 sinh(beta eta) avoids the ep - em cancellation at small beta eta.
  const double num = beta * eta < 1.0 ? 2.0 * std::sinh(beta * eta) * std::exp(-m) : ep - em;
  const double up = std::exp(beta * std::abs(U) - m);
  const double um = std::exp(-beta * std::abs(U) - m);
  return -t * num / (up + um + ep + em);
}

// Bisection down to `tolerance` or one ULP, whichever comes first.
// Requires g(lo) and g(hi) of opposite sign.
template <typename Fn>
double bisect(Fn g, double lo, double hi, double tolerance) {
  double g_lo = g(lo);
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= tolerance) return mid;
    const double g_mid = g(mid);
    if (g_mid == 0.0) return mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
}

double log_sinh(double y) {
  return y > 20.0 ? y + std::log1p(-std::exp(-2.0 * y)) - std::numbers::ln2 : std::log(std::sinh(y));
}

double log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double compute_kappa() {
  return bisect(kappa_equation_residual, 0.25, 0.5 - 1e-9, 0.0);
}

}  // namespace

std::string_view to_string(Phase phase) {
  return phase == Phase::condensed ? "condensed" : "normal";
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::second_order_safe:
      return "second_order_safe";
    case Regime::possible_first_order:
      return "possible_first_order";
    case Regime::no_condensation:
      return "no_condensation";
    case Regime::boundary:
      return "boundary";
  }
  return "unknown";
}

AccessibleInterval accessible_interval(const ModelParams& params) {
  return {params.U, std::sqrt(params.U * params.U + 2.0 * params.t * params.t)};
}

double f_beta(double eta, const ModelParams& params) {
  return raw_f_beta(eta, params.t, params.U, params.beta.value());
}

double f_beta(double eta, double t, double U, double beta) {
  return raw_f_beta(eta, t, U, beta);
}

double eta_from_lambda(const ModelParams& params, double lambda_mod) {
  return eta_of(params, Complex(lambda_mod, 0.0));
}

double lambda_from_eta(const ModelParams& params, double eta) {
  const double d = (eta - params.U) * (eta + params.U);
  return d > 0.0 ? std::sqrt(d) / (2.0 * std::abs(params.t)) : 0.0;
}

MeanFieldSolution solve_gap(const ModelParams& params, const GapSolverOptions& options) {
  require_physical(params);
  if (params.beta.is_infinite()) return ground_state_solution(params);
  if (options.grid_points < 2) throw InvalidArgument("gap solver needs at least 2 grid points");

  const auto [lower, upper] = accessible_interval(params);
  auto g = [&](double eta) { return f_beta(eta, params) - eta; };

  MeanFieldSolution sol;
  const int n = options.grid_points;
  const double step = (upper - lower) / (n - 1);
  double prev_x = lower;
  double prev_g = g(lower);
  for (int k = 1; k < n; ++k) {
    const double x = k == n - 1 ? upper : lower + k * step;
    const double gx = g(x);
    if (gx == 0.0) {
      sol.fixed_points.push_back(x);
    } else if (prev_g != 0.0 && (prev_g > 0.0) != (gx > 0.0)) {
      sol.fixed_points.push_back(bisect(g, prev_x, x, options.tolerance));
    }
    prev_x = x;
    prev_g = gx;
  }

  double best_gain = 0.0;
  double best_lambda = 0.0;
  for (double eta : sol.fixed_points) {
    sol.residual = std::max(sol.residual, std::abs(g(eta)));
    const double lam = lambda_from_eta(params, eta);
    const double gain = free_energy_gain(params, lam);
    if (gain < best_gain) {
      best_gain = gain;
      best_lambda = lam;
    }
  }

  sol.lambda_mod = best_lambda;
  sol.selected_eta = eta_from_lambda(params, best_lambda);
  sol.rho0 = 2.0 * best_lambda * best_lambda;
  sol.phase = best_lambda > 0.0 ? Phase::condensed : Phase::normal;
  sol.regime = classify_regime(params);
  sol.free_energy = free_energy_density(params, best_lambda);
  return sol;
}

double kappa_equation_residual(double kappa) {
  return 2.0 * std::atanh(2.0 * kappa) - 4.0 * kappa / (1.0 - 2.0 * kappa * kappa);
}

double tricritical_kappa() {
  static const double kappa = compute_kappa();
  return kappa;
}

double critical_beta(const ModelParams& params) {
  require_physical(params);
  const double minus_t = -params.t;
  if (!(2.0 * params.U < minus_t)) {
    throw ConditionViolated("critical temperature needs 2U < -t (U = " + std::to_string(params.U) +
                            ", t = " + std::to_string(params.t) + ")");
  }
  if (params.U == 0.0) return 2.0 / minus_t;
  // ln((1+x)/(1-x)) = 2 atanh(x)
  return std::atanh(2.0 * params.U / minus_t) / params.U;
}

MeanFieldSolution ground_state_solution(const ModelParams& params) {
  require_physical(params);
  const double minus_t = -params.t;
  if (params.U == minus_t) {
    throw DegenerateBoundary("U = -t is a degenerate point of the ground-state analysis");
  }
  MeanFieldSolution sol;
  sol.regime = classify_regime(params);
  if (params.U < minus_t) {
    sol.lambda_mod = std::sqrt((minus_t - params.U) * (minus_t + params.U)) / (2.0 * minus_t);
    sol.selected_eta = minus_t;
    sol.fixed_points = {minus_t};
    sol.phase = Phase::condensed;
  } else {
    sol.selected_eta = params.U;
    sol.phase = Phase::normal;
  }
  sol.rho0 = 2.0 * sol.lambda_mod * sol.lambda_mod;
  sol.free_energy = -std::max(params.U, sol.selected_eta) -
                    2.0 * params.t * sol.lambda_mod * sol.lambda_mod;
  return sol;
}

double condensate_bound(const ModelParams& params) {
  require_physical(params);
  if (!(params.U < -params.t)) {
    throw ConditionViolated("condensate bound needs U < -t");
  }
  const double t2 = params.t * params.t;
  return (t2 - params.U * params.U) / (2.0 * t2);
}

double free_energy_density(const ModelParams& params, double lambda_mod) {
  const double beta = params.beta.value();
  return -log_partition_function(params, Complex(lambda_mod, 0.0)) / beta -
         2.0 * params.t * lambda_mod * lambda_mod;
}

double free_energy_derivative(const ModelParams& params, double lambda_mod) {
  if (lambda_mod == 0.0) return 0.0;
  const double eta = eta_from_lambda(params, lambda_mod);
  // d/dx[-(1/beta) ln Z] = -(2 sinh(beta eta)/Z) * 4 t^2 x / eta = -4|t| x f(eta)/eta
  return 4.0 * lambda_mod * (-std::abs(params.t) * f_beta(eta, params) / eta - params.t);
}

double free_energy_gain(const ModelParams& params, double lambda_mod) {
  const double beta = params.beta.value();
  const double a2 = params.t * params.t * lambda_mod * lambda_mod;
  if (a2 == 0.0) return 0.0;
  const double eta = eta_from_lambda(params, lambda_mod);
  const double xi_plus = eta + params.U;
  const double xi_minus = 4.0 * a2 / xi_plus;
  // Z(eta)/Z(U) = 1 + sinh(beta xi+/2) sinh(beta xi-/2) / cosh(beta U)
  const double log_ratio = log_sinh(0.5 * beta * xi_plus) + log_sinh(0.5 * beta * xi_minus) -
                           log_cosh(beta * params.U);
  return -softplus(log_ratio) / beta - 2.0 * params.t * lambda_mod * lambda_mod;
}

Regime classify_regime(const ModelParams& params) {
  require_physical(params);
  const double minus_t = -params.t;
  if (params.U == minus_t || 2.0 * params.U == minus_t) return Regime::boundary;
  if (params.U > minus_t) return Regime::no_condensation;
  if (params.U < minus_t * tricritical_kappa()) return Regime::second_order_safe;
  return Regime::possible_first_order;
}

PhaseBoundary phase_boundary(const ModelParams& params) {
  PhaseBoundary pb;
  pb.kappa = tricritical_kappa();
  pb.regime = classify_regime(params);
  const double minus_t = -params.t;
  pb.case_a_possible = 2.0 * params.U < minus_t;
  pb.second_order_safe = params.U < minus_t * pb.kappa;
  pb.ground_state_condensed = params.U < minus_t;
  if (pb.case_a_possible) pb.beta_c = critical_beta(params);
  return pb;
}

double beta_for_lambda(double t, double U, double lambda_mod) {
  const ModelParams shape(t, U, InverseTemperature::infinite());
  require_physical(shape);
  if (!(lambda_mod > 0.0)) throw InvalidArgument("beta_for_lambda needs lambda_mod > 0");
  const double eta = eta_from_lambda(shape, lambda_mod);
  if (!(eta < -t)) {
    throw InvalidArgument("no finite temperature reaches lambda_mod = " + std::to_string(lambda_mod));
  }
  auto g = [&](double beta) { return raw_f_beta(eta, t, U, beta) - eta; };
  double lo = 0.0;
  double hi = 1.0;
  while (g(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw InvalidArgument("beta_for_lambda: no bracket found");
  }
  return bisect(g, lo, hi, 0.0);
}

}  // namespace hcb
