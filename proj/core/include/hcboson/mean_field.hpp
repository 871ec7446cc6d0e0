#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hcboson/model.hpp"

namespace hcb {

enum class Phase { normal, condensed };

/// Advisory classification of the (t, U) plane. `boundary` marks the
/// degenerate lines U = -t and U = -t/2, which are never silently assigned.
enum class Regime { second_order_safe, possible_first_order, no_condensation, boundary };

std::string_view to_string(Phase phase);
std::string_view to_string(Regime regime);

struct MeanFieldSolution {
  /// Non-trivial roots of eta = f_beta(eta) in the accessible interval, ascending.
  std::vector<double> fixed_points;
  double selected_eta = 0.0;
  double lambda_mod = 0.0;
  double rho0 = 0.0;
  Phase phase = Phase::normal;
  Regime regime = Regime::no_condensation;
  /// Variational free energy per site of the selected solution. At T = 0
  /// this is the ground-state energy per site.
  double free_energy = 0.0;
  /// max |eta - f_beta(eta)| over the fixed points (0 when there are none).
  double residual = 0.0;
};

struct PhaseBoundary {
  std::optional<double> beta_c;
  double kappa = 0.0;
  bool case_a_possible = false;     // 2U < -t
  bool second_order_safe = false;   // U < -t * kappa
  bool ground_state_condensed = false;  // U < -t
  Regime regime = Regime::no_condensation;
};

struct GapSolverOptions {
  int grid_points = 2048;
  double tolerance = 1e-13;
};

/// Accessible eta range [U, sqrt(U^2 + 2 t^2)]; the upper end is rho0 = 1.
struct AccessibleInterval {
  double lower = 0.0;
  double upper = 0.0;
};
AccessibleInterval accessible_interval(const ModelParams& params);

/// f_beta(eta) = -t sinh(beta eta) / (cosh(beta U) + cosh(beta eta)),
/// evaluated after dividing through by exp(beta max(eta, U)).
double f_beta(double eta, const ModelParams& params);

/// Same, from raw couplings. Accepts either sign of U; f_beta depends on |U| only.
double f_beta(double eta, double t, double U, double beta);

double eta_from_lambda(const ModelParams& params, double lambda_mod);
double lambda_from_eta(const ModelParams& params, double eta);

/// All solutions of the gap equation, the free-energy-selected stable one,
/// and the regime label. Infinite beta is routed to ground_state_solution.
MeanFieldSolution solve_gap(const ModelParams& params, const GapSolverOptions& options = {});

/// beta_c = (1/(2U)) ln((-t + 2U)/(-t - 2U)), with the U -> 0 limit 2/(-t).
double critical_beta(const ModelParams& params);

/// Root in (0, 1/2) of ln((1 + 2k)/(1 - 2k)) = 4k / (1 - 2k^2).
double tricritical_kappa();
double kappa_equation_residual(double kappa);

MeanFieldSolution ground_state_solution(const ModelParams& params);

/// Supremum (t^2 - U^2) / (2 t^2) of the condensate density over all temperatures.
double condensate_bound(const ModelParams& params);

/// phi(|lambda|) = -(1/beta) ln(2 cosh(beta U) + 2 cosh(beta eta)) - 2 t |lambda|^2.
double free_energy_density(const ModelParams& params, double lambda_mod);

/// d phi / d|lambda| in closed form.
double free_energy_derivative(const ModelParams& params, double lambda_mod);

/// phi(|lambda|) - phi(0) without the cancellation of the direct difference;
/// it is O(|lambda|^4) near a continuous transition.
double free_energy_gain(const ModelParams& params, double lambda_mod);

Regime classify_regime(const ModelParams& params);

PhaseBoundary phase_boundary(const ModelParams& params);

/// Inverse temperature at which the condensed solution has modulus
/// `lambda_mod`, found by bisection in beta (f_beta increases with beta).
/// Meant for the second-order regime, where that solution is unique.
double beta_for_lambda(double t, double U, double lambda_mod);

}  // namespace hcb
