#include "hcboson/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "hcboson/mean_field.hpp"

namespace hcb {

const PairInfo& pair_info(PairId id) {
  return kPairs[static_cast<std::size_t>(id)];
}

PlasmonFrequencies plasmon_frequencies(const ModelParams& params, double lambda_mod) {
  const double a2 = params.t * params.t * lambda_mod * lambda_mod;
  const double eta = std::sqrt(params.U * params.U + 4.0 * a2);
  PlasmonFrequencies xi;
  xi.xi_plus = eta + params.U;
  xi.xi_minus = xi.xi_plus > 0.0 ? 4.0 * a2 / xi.xi_plus : 0.0;
  return xi;
}

double quantisation_parameter(const ModelParams& params, double lambda_mod, FrequencyClass cls) {
  const double beta = params.beta.raw();
  const auto xi = plasmon_frequencies(params, lambda_mod);
  const double eta = 0.5 * (xi.xi_plus + xi.xi_minus);
  if (eta == 0.0) return 0.0;
  auto tanh_half = [&](double x) { return x > 0.0 ? std::tanh(0.5 * beta * x) : 0.0; };
  return cls == FrequencyClass::xi_plus ? 4.0 * xi.xi_minus / eta * tanh_half(xi.xi_plus)
                                        : 4.0 * xi.xi_plus / eta * tanh_half(xi.xi_minus);
}

std::pair<Operator, Operator> build_EJE(int i, int j, const Operator& a,
                                        const OneSiteSpectrum& spectrum) {
  if (i < 0 || j > 3 || !(i < j)) {
    throw InvalidArgument("build_EJE needs 0 <= i < j <= 3");
  }
  const Operator ij = spectrum.projections[i] * a * spectrum.projections[j];
  const Operator ji = spectrum.projections[j] * a * spectrum.projections[i];
  return {ij + ji, Complex(0.0, 1.0) * (ij - ji)};
}

FluctuationAnalysis analyze_fluctuations(const ModelParams& params, double lambda_mod) {
  if (!(lambda_mod >= 0.0)) throw InvalidArgument("lambda_mod must be >= 0");
  const double beta = params.beta.value();

  FluctuationAnalysis out;
  out.params = params;
  out.lambda_mod = lambda_mod;
  out.eta = eta_from_lambda(params, lambda_mod);
  out.xi = plasmon_frequencies(params, lambda_mod);
  out.spectrum = diagonalize_h(params, Complex(lambda_mod, 0.0));
  out.h = build_h_lambda(params, Complex(lambda_mod, 0.0));

  const auto w = gibbs_weights(out.spectrum, beta);
  out.rho = Operator::Zero(kSiteDim, kSiteDim);
  for (int k = 0; k < 4; ++k) out.rho += w[k] * out.spectrum.projections[k];

  const bool degenerate = params.t * lambda_mod == 0.0;
  const double eta = out.eta;
  for (const PairInfo& info : kPairs) {
    FluctuationPair& pair = out.pairs[static_cast<std::size_t>(info.id)];
    pair.info = info;
    std::tie(pair.E, pair.JE) = build_EJE(info.i, info.j, generator_operator(info.generator), out.spectrum);
    pair.n = std::sqrt(w[info.i] + w[info.j]);
    pair.hbar = quantisation_parameter(params, lambda_mod, info.frequency);
    const bool plus = info.frequency == FrequencyClass::xi_plus;
    pair.frequency = plus ? out.xi.xi_plus : out.xi.xi_minus;
    // At eta = 0 (U = 0, lambda -> 0) both ratios xi/eta tend to 1.
    const double other = plus ? out.xi.xi_minus : out.xi.xi_plus;
    pair.variance = eta > 0.0 ? 2.0 * other / eta : 2.0;
    pair.degenerate = degenerate;
  }
  return out;
}

FluctuationPair build_pair(const ModelParams& params, double lambda_mod, PairId id) {
  return analyze_fluctuations(params, lambda_mod).pairs[static_cast<std::size_t>(id)];
}

double commutator_dynamics_check(const FluctuationPair& pair, const Operator& h) {
  const Complex i_unit(0.0, 1.0);
  const double s_xi = pair.info.gap_sign * pair.frequency;
  const double r1 = max_abs(commutator(h, pair.E) + i_unit * s_xi * pair.JE);
  const double r2 = max_abs(commutator(h, pair.JE) - i_unit * s_xi * pair.E);
  return std::max(r1, r2);
}

Complex ccr_parameter(const FluctuationPair& pair, const Operator& rho) {
  return expectation(rho, commutator(pair.E, pair.JE));
}

Complex expected_ccr(const FluctuationPair& pair) {
  return Complex(0.0, pair.info.gap_sign * pair.n * pair.n * pair.hbar);
}

Variances variance(const FluctuationPair& pair, const Operator& rho) {
  const double n2 = pair.n * pair.n;
  return {expectation(rho, pair.E * pair.E).real() / n2,
          expectation(rho, pair.JE * pair.JE).real() / n2};
}

Eigen::Matrix2d Rotation2::matrix() const {
  Eigen::Matrix2d r;
  r << c, s, -s, c;
  return r;
}

Rotation2 evolve(const FluctuationPair& pair, double time) {
  const double phase = pair.frequency * time;
  return {std::cos(phase), std::sin(phase)};
}

double evolution_residual(const FluctuationPair& pair, const Operator& h, double time) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  const Eigen::VectorXcd phases =
      (Complex(0.0, -time) * solver.eigenvalues().cast<Complex>()).array().exp().matrix();
  // propagator = exp(-i h t)
  const Operator propagator = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  auto heisenberg = [&](const Operator& a) -> Operator {
    return propagator.adjoint() * a * propagator;
  };

  const double xs = pair.info.x_sign;
  const Operator x0 = xs * pair.E / pair.n;
  const Operator p0 = pair.JE / pair.n;
  const Operator xt = xs * heisenberg(pair.E) / pair.n;
  const Operator pt = heisenberg(pair.JE) / pair.n;
  const Rotation2 r = evolve(pair, time);
  return std::max(max_abs(xt - (r.c * x0 + r.s * p0)), max_abs(pt - (-r.s * x0 + r.c * p0)));
}

IndependenceTable independence_matrix(const std::array<FluctuationPair, 4>& pairs, const Operator& rho) {
  std::array<const Operator*, 8> ops{};
  for (int k = 0; k < 4; ++k) {
    ops[2 * k] = &pairs[k].E;
    ops[2 * k + 1] = &pairs[k].JE;
  }

  IndependenceTable table;
  table.min_distance = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 8; ++a) {
    table.max_mean = std::max(table.max_mean, std::abs(expectation(rho, *ops[a])));
    for (int b = 0; b < 8; ++b) {
      table.moments(a, b) = expectation(rho, (*ops[a]) * (*ops[b]));
    }
  }
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      if (a / 2 == b / 2) continue;
      table.max_cross_moment = std::max(table.max_cross_moment, std::abs(table.moments(a, b)));
      const Operator diff = *ops[a] - *ops[b];
      const double distance = expectation(rho, diff * diff).real();
      table.min_distance = std::min(table.min_distance, distance);
      const double sum = table.moments(a, a).real() + table.moments(b, b).real();
      table.max_distance_defect = std::max(table.max_distance_defect, std::abs(distance - sum));
    }
  }
  return table;
}

}  // namespace hcb
