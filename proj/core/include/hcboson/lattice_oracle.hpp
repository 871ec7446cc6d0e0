#pragma once

// Brute-force exact diagonalization of the complete-graph Hamiltonian
//   H = (t/N) sum_alpha sum_{i != j} s+_{i alpha} s-_{j alpha} + U sum_i s^z_{i1} s^z_{i2}
// on N sites (Hilbert dimension 4^N). Site k is base-4 digit k of a basis
// index, with the one-site layout of operator_algebra.hpp.
//
// The finite-volume Gibbs state is gauge invariant, so <s-> vanishes at every
// N; condensation shows up only through the zero-mode occupation.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "hcboson/operator_algebra.hpp"

namespace hcb {

struct LatticeSpec {
  static constexpr int kDefaultCap = 5;
  static constexpr int kLargeCap = 6;

  int n_sites = 1;
  ModelParams params;
  /// Opt in to N = 6 (dimension 4096, ~270 MB per dense complex matrix).
  bool allow_large = false;

  int cap() const { return allow_large ? kLargeCap : kDefaultCap; }
  /// Throws DimensionCap / InvalidArgument when n_sites is out of range.
  void validate() const;
  std::int64_t dimension() const;
};

/// A 4x4 one-site operator placed on one lattice site.
struct SiteFactor {
  int site;
  Operator op;
};

/// Dense 4^N matrix of a product of one-site operators. Factors on the same
/// site are multiplied in the order given.
Operator embed_product(std::span<const SiteFactor> factors, int n_sites);
Operator embed_site_operator(const Operator& op, int site, int n_sites);

/// prod_i (op)_i over all sites.
Operator product_over_sites(const Operator& op, int n_sites);

/// Unitary exchanging lattice sites a and b.
Operator site_swap(int a, int b, int n_sites);

Operator build_lattice_hamiltonian(const LatticeSpec& spec);

/// The unscaled Hamiltonian with interaction U_orig n_1 n_2 and chemical
/// potential mu = U_orig/2. It equals the rescaled Hamiltonian at U = U_orig/4
/// minus N U_orig/4 times the identity.
Operator build_original_hamiltonian(int n_sites, double t, double u_orig);

/// n_0 = sum_alpha a*_{0 alpha} a_{0 alpha} with a_{0 alpha} = N^{-1/2} sum_j s-_{j alpha}.
Operator zero_mode_number_operator(int n_sites);

/// Canonical Gibbs state of a lattice Hamiltonian, evaluated in its eigenbasis
/// with a ground-energy shift.
class LatticeGibbsState {
 public:
  LatticeGibbsState(const Operator& hamiltonian, double beta);

  Complex expectation(const Operator& a) const;
  double log_partition() const { return log_partition_; }
  const Eigen::VectorXd& energies() const { return energies_; }
  const Operator& density() const { return rho_; }

 private:
  Eigen::VectorXd energies_;
  Operator rho_;
  double log_partition_ = 0.0;
};

/// Tr(exp(-beta H) A) / Tr(exp(-beta H)).
Complex gibbs_lattice_expectation(const LatticeSpec& spec, const Operator& a);

double lattice_log_partition(const LatticeSpec& spec);

/// <n_0>/N = N^{-2} sum_alpha sum_{i,j} <s+_{i alpha} s-_{j alpha}>.
double zero_mode_density(const LatticeSpec& spec);

struct GaugeAngles {
  double phi1 = 0.0;
  double phi2 = 0.0;
};
/// Deterministic pseudo-random angles in [0, 2 pi).
GaugeAngles random_gauge_angles(std::uint64_t seed = 20000309);

/// Frobenius norms of [H, prod u_12], [H, prod s^x_1 s^x_2]
/// and [H, U(phi1, phi2)], keyed "type_exchange", "particle_hole", "gauge".
std::map<std::string, double> symmetry_commutator_residuals(const LatticeSpec& spec,
                                                            GaugeAngles angles = random_gauge_angles());

struct LatticeObservables {
  int n_sites = 0;
  double zero_mode_density = 0.0;
  /// (1/2N) sum_{i, alpha} <s^z_{i alpha}>.
  double sigma_z_per_site = 0.0;
  double energy_density = 0.0;
  std::map<std::string, double> symmetry_residuals;
};

/// All observables from a single diagonalization.
LatticeObservables observe(const LatticeSpec& spec, GaugeAngles angles = random_gauge_angles());

}  // namespace hcb
