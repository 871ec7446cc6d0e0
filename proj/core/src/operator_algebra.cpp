#include "hcboson/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

namespace hcb {
namespace {

using Mat2 = Eigen::Matrix2cd;

Mat2 pauli2(PauliKind kind) {
  Mat2 m = Mat2::Zero();
  switch (kind) {
    case PauliKind::plus:
      m(0, 1) = 1.0;
      break;
    case PauliKind::minus:
      m(1, 0) = 1.0;
      break;
    case PauliKind::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case PauliKind::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
  }
  return m;
}

// (type1 (x) type2) with the type-1 index running fastest.
Operator site_kron(const Mat2& type1, const Mat2& type2) {
  Operator out(kSiteDim, kSiteDim);
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp)
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
          out(a + 2 * b, ap + 2 * bp) = type1(a, ap) * type2(b, bp);
  return out;
}

OneSiteSpectrum closed_form_spectrum(const ModelParams& params, Complex lambda) {
  const Complex tl = params.t * lambda;
  const double a = std::abs(tl);
  if (a == 0.0) {
    throw DegenerateSpectrum(
        "closed-form eigenvectors need t*lambda != 0 (eta = U makes the U-eigenspace "
        "two-dimensional)");
  }
  const double U = params.U;
  const double eta = std::sqrt(U * U + 4.0 * a * a);
  // eta - U without cancellation.
  const double gap_minus = 4.0 * a * a / (eta + U);
  const double gap_plus = eta + U;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

  OneSiteSpectrum s;
  s.closed_form = true;
  s.eigenvalues = {-U, U, eta, -eta};

  s.eigenvectors[0] << 0.0, inv_sqrt2, -inv_sqrt2, 0.0;
  s.eigenvectors[1] << tl, 0.0, 0.0, -std::conj(tl);
  s.eigenvectors[1] *= inv_sqrt2 / a;
  s.eigenvectors[2] << tl, gap_minus / 2.0, gap_minus / 2.0, std::conj(tl);
  s.eigenvectors[2] /= std::sqrt(eta * gap_minus);
  s.eigenvectors[3] << tl, -gap_plus / 2.0, -gap_plus / 2.0, std::conj(tl);
  s.eigenvectors[3] /= std::sqrt(eta * gap_plus);

  for (int i = 0; i < 4; ++i) {
    s.projections[i] = s.eigenvectors[i] * s.eigenvectors[i].adjoint();
  }
  return s;
}

// Numeric path. Diagonalizes h at |lambda|, splits degenerate eigenspaces by
// the type-exchange / particle-hole parities, assigns slots by parity and
// energy, then gauge-rotates back to arg(lambda).
OneSiteSpectrum numeric_spectrum(const ModelParams& params, Complex lambda) {
  const double r = std::abs(lambda);
  const double theta = r > 0.0 ? std::arg(lambda) : 0.0;
  const Operator h = build_h_lambda(params, Complex(r, 0.0));

  const Eigen::Matrix4cd h4 = h;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h4);
  Eigen::Vector4d energies = solver.eigenvalues();
  Eigen::Matrix4cd vectors = solver.eigenvectors();

  const Operator u12 = symmetry_unitary(TypeExchange{});
  const Operator x12 = symmetry_unitary(ParticleHole{});
  const Operator label = u12 + 2.0 * x12;

  const double scale = std::max(1.0, energies.cwiseAbs().maxCoeff());
  const double cluster_tol = 1e-10 * scale;
  int begin = 0;
  while (begin < 4) {
    int end = begin + 1;
    while (end < 4 && energies(end) - energies(end - 1) <= cluster_tol) ++end;
    const int m = end - begin;
    if (m > 1) {
      Eigen::MatrixXcd block = vectors.middleCols(begin, m);
      Eigen::MatrixXcd reduced = block.adjoint() * label * block;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> split(reduced);
      vectors.middleCols(begin, m) = block * split.eigenvectors();
    }
    begin = end;
  }

  std::vector<int> remaining{0, 1, 2, 3};
  auto parity = [&](const Operator& op, int k) {
    return (vectors.col(k).adjoint() * op * vectors.col(k))(0, 0).real();
  };
  auto take_min = [&](auto key) {
    auto it = std::min_element(remaining.begin(), remaining.end(),
                               [&](int x, int y) { return key(x) < key(y); });
    const int k = *it;
    remaining.erase(it);
    return k;
  };
  std::array<int, 4> slot{};
  slot[0] = take_min([&](int k) { return parity(u12, k); });
  slot[1] = take_min([&](int k) { return parity(x12, k); });
  if (energies(remaining[0]) >= energies(remaining[1])) {
    slot[2] = remaining[0];
    slot[3] = remaining[1];
  } else {
    slot[2] = remaining[1];
    slot[3] = remaining[0];
  }

  const Operator gauge = symmetry_unitary(Gauge{theta, theta});
  OneSiteSpectrum s;
  s.closed_form = false;
  for (int i = 0; i < 4; ++i) {
    s.eigenvalues[i] = energies(slot[i]);
    s.eigenvectors[i] = gauge * vectors.col(slot[i]);
    s.projections[i] = s.eigenvectors[i] * s.eigenvectors[i].adjoint();
  }
  return s;
}

}  // namespace

Operator identity_site() { return Operator::Identity(kSiteDim, kSiteDim); }

Operator pauli_site_operator(ParticleType type, PauliKind kind) {
  const Mat2 id = Mat2::Identity();
  const Mat2 p = pauli2(kind);
  return type == ParticleType::first ? site_kron(p, id) : site_kron(id, p);
}

Operator generator_operator(Generator g) {
  const Operator z1 = pauli_site_operator(ParticleType::first, PauliKind::z);
  const Operator z2 = pauli_site_operator(ParticleType::second, PauliKind::z);
  return g == Generator::q_plus ? Operator(z1 + z2) : Operator(z1 - z2);
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

double max_abs(const Operator& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Operator& a, double tolerance) {
  return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tolerance;
}

double eta_of(const ModelParams& params, Complex lambda) {
  const double a = std::abs(params.t * lambda);
  return std::sqrt(params.U * params.U + 4.0 * a * a);
}

Operator build_h_lambda(const ModelParams& params, Complex lambda) {
  using enum PauliKind;
  const Complex tl = params.t * lambda;
  const Operator sp1 = pauli_site_operator(ParticleType::first, plus);
  const Operator sp2 = pauli_site_operator(ParticleType::second, plus);
  const Operator sm1 = pauli_site_operator(ParticleType::first, minus);
  const Operator sm2 = pauli_site_operator(ParticleType::second, minus);
  const Operator zz = pauli_site_operator(ParticleType::first, z) *
                      pauli_site_operator(ParticleType::second, z);
  return tl * (sp1 + sp2) + std::conj(tl) * (sm1 + sm2) + params.U * zz;
}

Operator OneSiteSpectrum::reconstruct() const {
  Operator out = Operator::Zero(kSiteDim, kSiteDim);
  for (int i = 0; i < 4; ++i) out += eigenvalues[i] * projections[i];
  return out;
}

OneSiteSpectrum diagonalize_h(const ModelParams& params, Complex lambda, EigenbasisMode mode) {
  switch (mode) {
    case EigenbasisMode::closed_form:
      return closed_form_spectrum(params, lambda);
    case EigenbasisMode::numeric:
      return numeric_spectrum(params, lambda);
    case EigenbasisMode::automatic:
      break;
  }
  return std::abs(params.t * lambda) > 0.0 ? closed_form_spectrum(params, lambda)
                                           : numeric_spectrum(params, lambda);
}

std::array<double, 4> gibbs_weights(const OneSiteSpectrum& spectrum, double beta) {
  const auto& e = spectrum.eigenvalues;
  const double lowest = *std::min_element(e.begin(), e.end());
  std::array<double, 4> w{};
  for (int i = 0; i < 4; ++i) w[i] = std::exp(-beta * (e[i] - lowest));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

double log_partition_function(const ModelParams& params, Complex lambda) {
  const double beta = params.beta.value();
  const double eta = eta_of(params, lambda);
  const std::array<double, 4> e{-params.U, params.U, eta, -eta};
  const double lowest = std::min(-params.U, -eta);
  double sum = 0.0;
  for (double x : e) sum += std::exp(-beta * (x - lowest));
  return -beta * lowest + std::log(sum);
}

Operator gibbs_density(const ModelParams& params, Complex lambda) {
  const double beta = params.beta.value();
  const OneSiteSpectrum spectrum = diagonalize_h(params, lambda);
  const auto w = gibbs_weights(spectrum, beta);
  Operator rho = Operator::Zero(kSiteDim, kSiteDim);
  for (int i = 0; i < 4; ++i) rho += w[i] * spectrum.projections[i];
  return rho;
}

Complex expectation(const Operator& rho, const Operator& a) {
  if (rho.rows() != a.rows() || rho.cols() != a.cols() || rho.rows() != rho.cols()) {
    throw InvalidArgument("expectation: operator dimensions do not match");
  }
  // Tr(rho A) = sum_ij rho_ij A_ji
  return (rho.array() * a.transpose().array()).sum();
}

Operator symmetry_unitary(const Symmetry& symmetry) {
  using enum PauliKind;
  const auto sp1 = pauli_site_operator(ParticleType::first, plus);
  const auto sm1 = pauli_site_operator(ParticleType::first, minus);
  const auto sp2 = pauli_site_operator(ParticleType::second, plus);
  const auto sm2 = pauli_site_operator(ParticleType::second, minus);

  if (std::holds_alternative<TypeExchange>(symmetry)) {
    return sp1 * sm1 * sp2 * sm2 + sm1 * sp1 * sm2 * sp2 + sp1 * sm2 + sm1 * sp2;
  }
  if (std::holds_alternative<ParticleHole>(symmetry)) {
    return pauli_site_operator(ParticleType::first, x) *
           pauli_site_operator(ParticleType::second, x);
  }
  const auto& g = std::get<Gauge>(symmetry);
  Operator u = Operator::Zero(kSiteDim, kSiteDim);
  for (int k = 0; k < kSiteDim; ++k) {
    const double z1 = (k & 1) ? -1.0 : 1.0;
    const double z2 = (k & 2) ? -1.0 : 1.0;
    u(k, k) = std::exp(Complex(0.0, 0.5 * (g.phi1 * z1 + g.phi2 * z2)));
  }
  return u;
}

}  // namespace hcb
