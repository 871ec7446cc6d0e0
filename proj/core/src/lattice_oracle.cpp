#include "hcboson/lattice_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

namespace hcb {
namespace {

std::int64_t pow4(int n) { return std::int64_t{1} << (2 * n); }

int digit(std::int64_t index, int site) { return static_cast<int>((index >> (2 * site)) & 3); }

// target += coeff * (product of factors). Factors on the same site are merged
// left to right.
void accumulate_product(Operator& target, std::span<const SiteFactor> factors, Complex coeff,
                        int n_sites) {
  std::map<int, Operator> merged;
  for (const auto& f : factors) {
    if (f.site < 0 || f.site >= n_sites) throw InvalidArgument("site index out of range");
    if (f.op.rows() != kSiteDim || f.op.cols() != kSiteDim) {
      throw InvalidArgument("site factors must be 4x4");
    }
    auto [it, fresh] = merged.try_emplace(f.site, f.op);
    if (!fresh) it->second = it->second * f.op;
  }

  struct Entry {
    int row;
    Complex value;
  };
  struct Local {
    int site;
    std::array<std::vector<Entry>, kSiteDim> by_column;  // nonzero rows per local column
  };
  std::vector<Local> locals;
  for (const auto& [site, op] : merged) {
    Local l{site, {}};
    for (int c = 0; c < kSiteDim; ++c)
      for (int r = 0; r < kSiteDim; ++r)
        if (op(r, c) != Complex(0.0)) l.by_column[c].push_back({r, op(r, c)});
    locals.push_back(std::move(l));
  }

  const std::int64_t dim = pow4(n_sites);
  // Depth-first expansion over the involved sites.
  std::vector<std::size_t> cursor(locals.size());
  for (std::int64_t col = 0; col < dim; ++col) {
    auto expand = [&](auto&& self, std::size_t k, std::int64_t row, Complex value) -> void {
      if (k == locals.size()) {
        target(row, col) += coeff * value;
        return;
      }
      const int site = locals[k].site;
      const int c = digit(col, site);
      for (const Entry& e : locals[k].by_column[c]) {
        self(self, k + 1, row + (static_cast<std::int64_t>(e.row - c) << (2 * site)), value * e.value);
      }
    };
    expand(expand, 0, col, Complex(1.0));
  }
}

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double commutator_norm(const Operator& h, const Operator& u) {
  const Eigen::SparseMatrix<Complex> s = u.sparseView();
  const Operator hs = h * s;
  const Operator sh = s * h;
  return (hs - sh).norm();
}

Operator sigma_z_total(int n_sites) {
  using enum ParticleType;
  const Operator z = pauli_site_operator(first, PauliKind::z) + pauli_site_operator(second, PauliKind::z);
  Operator out = Operator::Zero(pow4(n_sites), pow4(n_sites));
  for (int i = 0; i < n_sites; ++i) {
    const SiteFactor f{i, z};
    accumulate_product(out, {&f, 1}, 1.0, n_sites);
  }
  return out;
}

}  // namespace

void LatticeSpec::validate() const {
  if (n_sites < 1) throw InvalidArgument("lattice needs at least one site");
  if (n_sites > cap()) {
    throw DimensionCap("N = " + std::to_string(n_sites) + " exceeds the dense diagonalization cap of " +
                       std::to_string(cap()) + (allow_large ? "" : " (N = 6 needs the large-lattice opt-in)"));
  }
}

std::int64_t LatticeSpec::dimension() const { return pow4(n_sites); }

Operator embed_product(std::span<const SiteFactor> factors, int n_sites) {
  const auto dim = pow4(n_sites);
  Operator out = Operator::Zero(dim, dim);
  accumulate_product(out, factors, 1.0, n_sites);
  return out;
}

Operator embed_site_operator(const Operator& op, int site, int n_sites) {
  const SiteFactor f{site, op};
  return embed_product({&f, 1}, n_sites);
}

Operator product_over_sites(const Operator& op, int n_sites) {
  Operator out = Operator::Identity(1, 1);
  for (int i = 0; i < n_sites; ++i) out = kron(op, out);
  return out;
}

Operator site_swap(int a, int b, int n_sites) {
  if (a < 0 || b < 0 || a >= n_sites || b >= n_sites) throw InvalidArgument("site index out of range");
  const auto dim = pow4(n_sites);
  Operator out = Operator::Zero(dim, dim);
  for (std::int64_t col = 0; col < dim; ++col) {
    const int da = digit(col, a);
    const int db = digit(col, b);
    std::int64_t row = col;
    row += static_cast<std::int64_t>(db - da) << (2 * a);
    row += static_cast<std::int64_t>(da - db) << (2 * b);
    out(row, col) = 1.0;
  }
  return out;
}

Operator build_lattice_hamiltonian(const LatticeSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  if (spec.allow_large && n > LatticeSpec::kDefaultCap) {
    std::fprintf(stderr, "warning: dense lattice of dimension %lld needs several hundred MB\n",
                 static_cast<long long>(spec.dimension()));
  }
  using enum PauliKind;
  Operator h = Operator::Zero(spec.dimension(), spec.dimension());
  const double hop = spec.params.t / n;
  for (ParticleType type : {ParticleType::first, ParticleType::second}) {
    const Operator sp = pauli_site_operator(type, plus);
    const Operator sm = pauli_site_operator(type, minus);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const std::array<SiteFactor, 2> f{{{i, sp}, {j, sm}}};
        accumulate_product(h, f, hop, n);
      }
    }
  }
  const Operator zz = pauli_site_operator(ParticleType::first, z) * pauli_site_operator(ParticleType::second, z);
  for (int i = 0; i < n; ++i) {
    const SiteFactor f{i, zz};
    accumulate_product(h, {&f, 1}, spec.params.U, n);
  }
  return h;
}

Operator build_original_hamiltonian(int n_sites, double t, double u_orig) {
  LatticeSpec spec{n_sites, ModelParams(t, 0.0, InverseTemperature::infinite())};
  spec.validate();
  using enum PauliKind;
  Operator h = build_lattice_hamiltonian(spec);
  const double mu = u_orig / 2.0;
  const Operator n1 = pauli_site_operator(ParticleType::first, plus) * pauli_site_operator(ParticleType::first, minus);
  const Operator n2 = pauli_site_operator(ParticleType::second, plus) * pauli_site_operator(ParticleType::second, minus);
  const Operator local = -mu * (n1 + n2) + u_orig * n1 * n2;
  for (int i = 0; i < n_sites; ++i) {
    const SiteFactor f{i, local};
    accumulate_product(h, {&f, 1}, 1.0, n_sites);
  }
  return h;
}

Operator zero_mode_number_operator(int n_sites) {
  using enum PauliKind;
  Operator n0 = Operator::Zero(pow4(n_sites), pow4(n_sites));
  for (ParticleType type : {ParticleType::first, ParticleType::second}) {
    const Operator sp = pauli_site_operator(type, plus);
    const Operator sm = pauli_site_operator(type, minus);
    for (int i = 0; i < n_sites; ++i) {
      for (int j = 0; j < n_sites; ++j) {
        const std::array<SiteFactor, 2> f{{{i, sp}, {j, sm}}};
        accumulate_product(n0, f, 1.0 / n_sites, n_sites);
      }
    }
  }
  return n0;
}

LatticeGibbsState::LatticeGibbsState(const Operator& hamiltonian, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("lattice Gibbs state needs finite beta > 0");
  auto weights_from = [&](const Eigen::VectorXd& e) {
    const double e0 = e.minCoeff();
    Eigen::VectorXd w = (-beta * (e.array() - e0)).exp().matrix();
    const double total = w.sum();
    log_partition_ = -beta * e0 + std::log(total);
    return Eigen::VectorXd(w / total);
  };

  if (max_abs(hamiltonian.imag()) == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian.real());
    energies_ = solver.eigenvalues();
    const Eigen::VectorXd w = weights_from(energies_);
    const Eigen::MatrixXd& v = solver.eigenvectors();
    rho_ = (v * w.asDiagonal() * v.transpose()).cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian);
    energies_ = solver.eigenvalues();
    const Eigen::VectorXd w = weights_from(energies_);
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    rho_ = v * w.cast<Complex>().asDiagonal() * v.adjoint();
  }
}

Complex LatticeGibbsState::expectation(const Operator& a) const { return hcb::expectation(rho_, a); }

Complex gibbs_lattice_expectation(const LatticeSpec& spec, const Operator& a) {
  const LatticeGibbsState state(build_lattice_hamiltonian(spec), spec.params.beta.value());
  return state.expectation(a);
}

double lattice_log_partition(const LatticeSpec& spec) {
  const Operator h = build_lattice_hamiltonian(spec);
  const double beta = spec.params.beta.value();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& e = solver.eigenvalues();
  const double e0 = e.minCoeff();
  return -beta * e0 + std::log((-beta * (e.array() - e0)).exp().sum());
}

double zero_mode_density(const LatticeSpec& spec) {
  const LatticeGibbsState state(build_lattice_hamiltonian(spec), spec.params.beta.value());
  return state.expectation(zero_mode_number_operator(spec.n_sites)).real() / spec.n_sites;
}

GaugeAngles random_gauge_angles(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double phi1 = angle(rng);
  return {phi1, angle(rng)};
}

std::map<std::string, double> symmetry_commutator_residuals(const LatticeSpec& spec, GaugeAngles angles) {
  const Operator h = build_lattice_hamiltonian(spec);
  const int n = spec.n_sites;
  return {
      {"type_exchange", commutator_norm(h, product_over_sites(symmetry_unitary(TypeExchange{}), n))},
      {"particle_hole", commutator_norm(h, product_over_sites(symmetry_unitary(ParticleHole{}), n))},
      {"gauge", commutator_norm(h, product_over_sites(symmetry_unitary(Gauge{angles.phi1, angles.phi2}), n))},
  };
}

LatticeObservables observe(const LatticeSpec& spec, GaugeAngles angles) {
  const Operator h = build_lattice_hamiltonian(spec);
  const LatticeGibbsState state(h, spec.params.beta.value());
  const int n = spec.n_sites;

  LatticeObservables obs;
  obs.n_sites = n;
  obs.zero_mode_density = state.expectation(zero_mode_number_operator(n)).real() / n;
  obs.sigma_z_per_site = state.expectation(sigma_z_total(n)).real() / (2.0 * n);
  obs.energy_density = state.expectation(h).real() / n;
  obs.symmetry_residuals = {
      {"type_exchange", commutator_norm(h, product_over_sites(symmetry_unitary(TypeExchange{}), n))},
      {"particle_hole", commutator_norm(h, product_over_sites(symmetry_unitary(ParticleHole{}), n))},
      {"gauge", commutator_norm(h, product_over_sites(symmetry_unitary(Gauge{angles.phi1, angles.phi2}), n))},
  };
  return obs;
}

}  // namespace hcb
