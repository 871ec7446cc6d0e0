#pragma once

// One-site (4x4) operator algebra of the two-type hard-core boson model.
//
// Basis convention: for A acting on type 1 and B acting on type 2, the 4x4
// matrix of A (x) B has entry (a + 2b, a' + 2b') = A(a, a') * B(b, b'), i.e.
// the type-1 index runs fastest. Local state 0 of each type is the occupied
// (sigma^z = +1) state.

#include <array>
#include <complex>
#include <variant>

#include <Eigen/Dense>

#include "hcboson/model.hpp"

namespace hcb {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;

inline constexpr int kSiteDim = 4;

enum class ParticleType { first = 1, second = 2 };
enum class PauliKind { plus, minus, z, x };

/// Q_+ = s^z_1 + s^z_2 and Q_- = s^z_1 - s^z_2, the generators of the gauge group.
enum class Generator { q_plus, q_minus };

Operator identity_site();

/// sigma^kind for one particle type, embedded in the 4x4 one-site algebra.
Operator pauli_site_operator(ParticleType type, PauliKind kind);

Operator generator_operator(Generator g);

Operator commutator(const Operator& a, const Operator& b);

bool is_hermitian(const Operator& a, double tolerance = 1e-14);

/// Max absolute entry.
double max_abs(const Operator& a);

/// eta = sqrt(U^2 + 4 |t lambda|^2).
double eta_of(const ModelParams& params, Complex lambda);

/// The mean-field one-site Hamiltonian h_lambda.
Operator build_h_lambda(const ModelParams& params, Complex lambda);

/// Spectrum of h_lambda in the fixed slot order (-U, U, eta, -eta).
struct OneSiteSpectrum {
  std::array<double, 4> eigenvalues{};
  std::array<Eigen::Vector4cd, 4> eigenvectors;
  std::array<Operator, 4> projections;
  /// True when the eigenvectors are the closed-form vectors; false when they
  /// come from the numeric, symmetry-adapted path.
  bool closed_form = false;

  /// sum_i eps_i P_i.
  Operator reconstruct() const;
};

enum class EigenbasisMode {
  /// Closed form for lambda != 0, symmetry-adapted numeric basis at lambda = 0.
  automatic,
  /// Closed form only; throws DegenerateSpectrum at lambda = 0.
  closed_form,
  /// Numeric eigensolver; degenerate eigenspaces are split by the
  /// type-exchange and particle-hole parities.
  numeric,
};

OneSiteSpectrum diagonalize_h(const ModelParams& params, Complex lambda,
                              EigenbasisMode mode = EigenbasisMode::automatic);

/// Normalized Boltzmann weights exp(-beta eps_i) / Z per spectrum slot,
/// evaluated with a max-eigenvalue shift.
std::array<double, 4> gibbs_weights(const OneSiteSpectrum& spectrum, double beta);

/// ln Tr exp(-beta h_lambda); the closed form is ln(2 cosh(beta U) + 2 cosh(beta eta)).
double log_partition_function(const ModelParams& params, Complex lambda);

/// rho = exp(-beta h_lambda) / Tr exp(-beta h_lambda). Requires finite beta.
Operator gibbs_density(const ModelParams& params, Complex lambda);

/// Tr(rho A).
Complex expectation(const Operator& rho, const Operator& a);

struct TypeExchange {};
struct ParticleHole {};
struct Gauge {
  double phi1 = 0.0;
  double phi2 = 0.0;
};
using Symmetry = std::variant<TypeExchange, ParticleHole, Gauge>;

/// One-site unitary implementing a symmetry:
///   type exchange:  u_12 = s+_1 s-_1 s+_2 s-_2 + s-_1 s+_1 s-_2 s+_2 + s+_1 s-_2 + s-_1 s+_2
///   particle-hole:  s^x_1 s^x_2
///   gauge:          exp((i/2)(phi1 s^z_1 + phi2 s^z_2))
Operator symmetry_unitary(const Symmetry& symmetry);

}  // namespace hcb
