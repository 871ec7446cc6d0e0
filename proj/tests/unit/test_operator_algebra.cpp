#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "hcboson/mean_field.hpp"
#include "hcboson/operator_algebra.hpp"
#include "oracles.hpp"

using namespace hcb;
using enum PauliKind;

namespace {

const Operator I4 = identity_site();

Operator sp(int type) { return pauli_site_operator(type == 1 ? ParticleType::first : ParticleType::second, plus); }
Operator sm(int type) { return pauli_site_operator(type == 1 ? ParticleType::first : ParticleType::second, minus); }
Operator sz(int type) { return pauli_site_operator(type == 1 ? ParticleType::first : ParticleType::second, z); }

ModelParams params(double t, double U, double beta = 5.0) {
  return ModelParams(t, U, InverseTemperature::finite(beta));
}

// Residual of u |phi> = parity |phi>.
double parity_residual(const Operator& u, const Eigen::Vector4cd& phi, double parity) {
  return (u * phi - parity * phi).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("pauli_site_operator") {
  TEST_CASE("sigma^z squares to the identity") {
    CHECK(oracle::max_abs(sz(1) * sz(1) - I4) == 0.0);
    CHECK(oracle::max_abs(sz(2) * sz(2) - I4) == 0.0);
  }

  TEST_CASE("different types commute") {
    CHECK(oracle::max_abs(commutator(sp(1), sm(2))) == 0.0);
    CHECK(oracle::max_abs(commutator(sp(2), sm(1))) == 0.0);
  }

  TEST_CASE("hard-core algebra per type") {
    for (int a : {1, 2}) {
      CHECK(oracle::max_abs(sp(a) * sp(a)) == 0.0);
      CHECK(oracle::max_abs(sp(a) * sm(a) - 0.5 * (sz(a) + I4)) == 0.0);
      CHECK(oracle::max_abs(commutator(sp(a), sm(a)) - sz(a)) == 0.0);
      CHECK(oracle::max_abs(sm(a) - sp(a).adjoint()) == 0.0);
    }
  }

  TEST_CASE("layout matches the A (x) B isomorphism with the type-1 index fastest") {
    // A (x) B entry (a + 2b, a' + 2b') = A(a, a') B(b, b'): build it literally.
    Eigen::Matrix2cd p;
    p << 0, 1, 0, 0;
    const Eigen::MatrixXcd id2 = Eigen::Matrix2cd::Identity();
    CHECK(oracle::max_abs(sp(1) - oracle::kron(id2, p)) == 0.0);
    CHECK(oracle::max_abs(sp(2) - oracle::kron(p, id2)) == 0.0);
  }
}

TEST_SUITE("build_h_lambda") {
  TEST_CASE("entries match the printed 4x4 matrix") {
    const double t = -0.7, U = 0.3;
    const Complex lam(0.2, 0.15);
    const Complex tl = t * lam, tlb = t * std::conj(lam);
    Eigen::Matrix4cd expected;
    expected << U, tl, tl, 0,
                tlb, -U, 0, tl,
                tlb, 0, -U, tl,
                0, tlb, tlb, U;
    CHECK(oracle::max_abs(build_h_lambda(params(t, U), lam) - Operator(expected)) == 0.0);
  }

  TEST_CASE("lambda = 0 gives eigenvalues +-U twice") {
    const Operator h = build_h_lambda(params(-1.0, 0.3), 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(h);
    const Eigen::Vector4d e = s.eigenvalues();
    CHECK(std::abs(e(0) + 0.3) < 1e-15);
    CHECK(std::abs(e(1) + 0.3) < 1e-15);
    CHECK(std::abs(e(2) - 0.3) < 1e-15);
    CHECK(std::abs(e(3) - 0.3) < 1e-15);
  }

  TEST_CASE("numeric eigenvalues at lambda = 0.2 are +-0.3, +-0.5") {
    const Operator h = build_h_lambda(params(-1.0, 0.3), 0.2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(h);
    const Eigen::Vector4d e = s.eigenvalues();
    const double expected[] = {-0.5, -0.3, 0.3, 0.5};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(e(k) - expected[k]) < 1e-14);
  }

  TEST_CASE("hermitian for complex lambda") {
    CHECK(is_hermitian(build_h_lambda(params(-1.3, 0.8), Complex(0.3, -0.7))));
  }

  TEST_CASE("property: spectrum is {-U, U, eta, -eta} at random points") {
    oracle::Rng rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const double t = -rng.uniform(0.01, 3.0);
      const double U = rng.uniform(0.0, 2.0);
      const double r = rng.uniform(0.0, 1.0);
      const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const Complex lam = std::polar(r, th);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(build_h_lambda(params(t, U), lam));
      const double eta = std::sqrt(U * U + 4.0 * std::norm(t * lam));
      std::array<double, 4> expected{-U, U, eta, -eta};
      std::sort(expected.begin(), expected.end());
      for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(s.eigenvalues()(k) - expected[k]));
    }
    CHECK(worst < 1e-11);
  }
}

TEST_SUITE("diagonalize_h") {
  TEST_CASE("closed-form eigenvectors are orthonormal eigenvectors") {
    const auto p = params(-1.0, 0.3);
    const auto spec = diagonalize_h(p, 0.2);
    REQUIRE(spec.closed_form);
    const Operator h = build_h_lambda(p, 0.2);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const Complex ip = spec.eigenvectors[i].dot(spec.eigenvectors[j]);
        CHECK(std::abs(ip - Complex(i == j ? 1.0 : 0.0)) < 1e-12);
      }
      CHECK((h * spec.eigenvectors[i] - spec.eigenvalues[i] * spec.eigenvectors[i]).norm() < 1e-12);
    }
    CHECK(std::abs(spec.eigenvalues[2] - 0.5) < 1e-15);
    CHECK(oracle::max_abs(spec.reconstruct() - h) < 1e-12);
  }

  TEST_CASE("complex lambda keeps the closed form exact") {
    const auto p = params(-0.9, 0.4);
    const Complex lam = std::polar(0.35, 1.1);
    const auto spec = diagonalize_h(p, lam);
    const Operator h = build_h_lambda(p, lam);
    for (int i = 0; i < 4; ++i) {
      CHECK((h * spec.eigenvectors[i] - spec.eigenvalues[i] * spec.eigenvectors[i]).norm() < 1e-12);
    }
  }

  TEST_CASE("projections are complete and idempotent") {
    oracle::Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const auto p = params(-rng.uniform(0.1, 2.0), rng.uniform(0.0, 2.0));
      const auto spec = diagonalize_h(p, std::polar(rng.uniform(1e-3, 1.0), rng.uniform(0.0, 6.0)));
      Operator sum = Operator::Zero(4, 4);
      for (int i = 0; i < 4; ++i) {
        sum += spec.projections[i];
        for (int j = 0; j < 4; ++j) {
          const Operator expected = i == j ? spec.projections[i] : Operator(Operator::Zero(4, 4));
          CHECK(oracle::max_abs(spec.projections[i] * spec.projections[j] - expected) < 1e-12);
        }
      }
      CHECK(oracle::max_abs(sum - I4) < 1e-12);
    }
  }

  TEST_CASE("closed form refuses the degenerate point lambda = 0") {
    CHECK_THROWS_AS(diagonalize_h(params(-1.0, 0.3), 0.0, EigenbasisMode::closed_form), DegenerateSpectrum);
  }

  TEST_CASE("lambda = 0 falls back to a parity-adapted numeric basis") {
    const auto p = params(-1.0, 0.3);
    const auto spec = diagonalize_h(p, 0.0);
    CHECK_FALSE(spec.closed_form);
    CHECK(spec.eigenvalues[0] == doctest::Approx(-0.3));
    CHECK(spec.eigenvalues[1] == doctest::Approx(0.3));
    CHECK(spec.eigenvalues[2] == doctest::Approx(0.3));
    CHECK(spec.eigenvalues[3] == doctest::Approx(-0.3));
    const Operator u12 = symmetry_unitary(TypeExchange{});
    const Operator x12 = symmetry_unitary(ParticleHole{});
    CHECK(parity_residual(u12, spec.eigenvectors[0], -1.0) < 1e-12);
    CHECK(parity_residual(x12, spec.eigenvectors[1], -1.0) < 1e-12);
    CHECK(parity_residual(x12, spec.eigenvectors[2], 1.0) < 1e-12);
    CHECK(oracle::max_abs(spec.reconstruct() - build_h_lambda(p, 0.0)) < 1e-12);
  }

  TEST_CASE("numeric mode reproduces the closed-form projections away from lambda = 0") {
    const auto p = params(-1.2, 0.45);
    const Complex lam = std::polar(0.3, -0.8);
    const auto closed = diagonalize_h(p, lam, EigenbasisMode::closed_form);
    const auto numeric = diagonalize_h(p, lam, EigenbasisMode::numeric);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(closed.eigenvalues[i] - numeric.eigenvalues[i]) < 1e-12);
      CHECK(oracle::max_abs(closed.projections[i] - numeric.projections[i]) < 1e-12);
    }
  }
}

TEST_SUITE("gibbs_density") {
  TEST_CASE("unit trace, positive, closed-form partition function") {
    const auto p = params(-1.0, 0.3, 5.0);
    const Operator rho = gibbs_density(p, 0.2);
    CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-13);
    CHECK(is_hermitian(rho, 1e-14));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(rho);
    CHECK(s.eigenvalues().minCoeff() > -1e-15);
    const double closed = std::log(2.0 * std::cosh(5.0 * 0.3) + 2.0 * std::cosh(5.0 * 0.5));
    CHECK(std::abs(log_partition_function(p, 0.2) - closed) < 1e-13);
  }

  TEST_CASE("energy equals the eigenbasis Boltzmann average") {
    const auto p = params(-1.0, 0.3, 5.0);
    const Operator h = build_h_lambda(p, 0.2);
    const double eps[] = {-0.3, 0.3, 0.5, -0.5};
    double z = 0.0, num = 0.0;
    for (double e : eps) {
      z += std::exp(-5.0 * e);
      num += e * std::exp(-5.0 * e);
    }
    CHECK(std::abs(expectation(gibbs_density(p, 0.2), h).real() - num / z) < 1e-13);
  }

  TEST_CASE("large beta at lambda = 0 concentrates on the -U eigenspace") {
    const auto p = params(-1.0, 0.3, 1000.0);
    const Operator rho = gibbs_density(p, 0.0);
    CHECK(rho.allFinite());
    const auto spec = diagonalize_h(p, 0.0);
    const Operator ground = spec.projections[0] + spec.projections[3];
    CHECK(oracle::max_abs(rho - 0.5 * ground) < 1e-12);
  }

  TEST_CASE("half filling for real lambda") {
    oracle::Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = params(-rng.uniform(0.1, 2.0), rng.uniform(0.0, 1.5), rng.uniform(0.1, 50.0));
      const Operator rho = gibbs_density(p, rng.uniform(0.0, 0.7));
      CHECK(std::abs(expectation(rho, sz(1))) < 1e-13);
      CHECK(std::abs(expectation(rho, sz(2))) < 1e-13);
    }
  }

  TEST_CASE("rho commutes with h") {
    const auto p = params(-0.8, 0.6, 3.0);
    const Complex lam = std::polar(0.4, 0.3);
    CHECK(oracle::max_abs(commutator(gibbs_density(p, lam), build_h_lambda(p, lam))) < 1e-12);
  }

  TEST_CASE("infinite beta is rejected") {
    const ModelParams p(-1.0, 0.3, InverseTemperature::infinite());
    CHECK_THROWS_AS(gibbs_density(p, 0.2), InvalidArgument);
  }
}

TEST_SUITE("expectation") {
  TEST_CASE("identity has unit expectation") {
    CHECK(std::abs(expectation(gibbs_density(params(-1.0, 0.3), 0.1), I4) - Complex(1.0)) < 1e-14);
  }

  TEST_CASE("lambda is reproduced at a gap solution and Q+- vanish") {
    const auto p = params(-1.0, 0.25, 4.0);
    const auto sol = solve_gap(p);
    const Operator rho = gibbs_density(p, sol.lambda_mod);
    CHECK(std::abs(expectation(rho, sm(1)) - sol.lambda_mod) < 1e-10);
    CHECK(std::abs(expectation(rho, sm(2)) - sol.lambda_mod) < 1e-10);
    CHECK(std::abs(expectation(rho, generator_operator(Generator::q_plus))) < 1e-14);
    CHECK(std::abs(expectation(rho, generator_operator(Generator::q_minus))) < 1e-14);
  }

  TEST_CASE("dimension mismatch throws") {
    CHECK_THROWS_AS(expectation(I4, Operator::Identity(2, 2)), InvalidArgument);
  }
}

TEST_SUITE("symmetry_unitary") {
  TEST_CASE("type-exchange and particle-hole parities of the eigenvectors") {
    const auto spec = diagonalize_h(params(-1.0, 0.3), 0.2);
    const Operator u12 = symmetry_unitary(TypeExchange{});
    const Operator x12 = symmetry_unitary(ParticleHole{});
    const double u_parity[] = {-1, 1, 1, 1};
    const double x_parity[] = {-1, -1, 1, 1};
    for (int i = 0; i < 4; ++i) {
      CHECK(parity_residual(u12, spec.eigenvectors[i], u_parity[i]) < 1e-13);
      CHECK(parity_residual(x12, spec.eigenvectors[i], x_parity[i]) < 1e-13);
    }
  }

  TEST_CASE("unitary involutions commuting with h at real lambda") {
    const Operator h = build_h_lambda(params(-1.1, 0.7), 0.33);
    for (const Symmetry& s : {Symmetry{TypeExchange{}}, Symmetry{ParticleHole{}}}) {
      const Operator u = symmetry_unitary(s);
      CHECK(oracle::max_abs(u * u.adjoint() - I4) < 1e-13);
      CHECK(oracle::max_abs(u * u - I4) < 1e-13);
      CHECK(oracle::max_abs(commutator(u, h)) < 1e-12);
    }
  }

  TEST_CASE("type exchange swaps the two particle types") {
    const Operator u12 = symmetry_unitary(TypeExchange{});
    CHECK(oracle::max_abs(u12 * sp(1) * u12 - sp(2)) == 0.0);
    CHECK(oracle::max_abs(u12 * sz(2) * u12 - sz(1)) == 0.0);
  }

  TEST_CASE("gauge rotation is unitary and covariant, not invariant") {
    const double phi = 0.9;
    const Operator g = symmetry_unitary(Gauge{phi, phi});
    CHECK(oracle::max_abs(g * g.adjoint() - I4) < 1e-13);
    const auto p = params(-1.0, 0.3);
    const Complex lam = 0.2;
    const Complex rotated = std::exp(Complex(0.0, -phi)) * lam;
    CHECK(oracle::max_abs(g.adjoint() * build_h_lambda(p, lam) * g - build_h_lambda(p, rotated)) < 1e-14);
    CHECK(oracle::max_abs(g * sp(1) * g.adjoint() - std::exp(Complex(0.0, phi)) * sp(1)) < 1e-15);
    CHECK(oracle::max_abs(commutator(g, build_h_lambda(p, lam))) > 1e-3);
  }

  TEST_CASE("independent angles act on their own type only") {
    const Operator g = symmetry_unitary(Gauge{0.4, 1.3});
    CHECK(oracle::max_abs(g * sm(2) * g.adjoint() - std::exp(Complex(0.0, -1.3)) * sm(2)) < 1e-15);
    CHECK(oracle::max_abs(g * sm(1) * g.adjoint() - std::exp(Complex(0.0, -0.4)) * sm(1)) < 1e-15);
  }
}
