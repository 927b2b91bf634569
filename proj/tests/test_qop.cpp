#include <doctest.h>

#include <numbers>
#include <random>

#include "bqa/qop.hpp"
#include "bqa/spin.hpp"
#include "oracles.hpp"

using namespace bqa;

TEST_CASE("kron_embed: identity and diagonal expansion") {
  CHECK(max_abs(kron_embed(identity(3), 2, 2, 3) - identity(9)) == 0.0);

  const Operator sz1 = kron_embed(spin1_ops().sz, 1, 2, 3);
  RealVector expected(9);
  expected << 1, 1, 1, 0, 0, 0, -1, -1, -1;
  CHECK(max_abs(sz1 - Operator(expected.cast<cplx>().asDiagonal())) == 0.0);

  const Operator x1 = kron_embed(spin_half_ops().sigx, 1, 3, 2);
  CHECK(x1.rows() == 8);
  CHECK(x1(0, 4) == cplx(1.0, 0.0));
  CHECK(max_abs(x1 - oracle::embed(oracle::Mat(spin_half_ops().sigx), 0, 3)) == 0.0);
}

TEST_CASE("kron_embed: matches loop-based Kronecker oracle") {
  std::mt19937 rng(7);
  for (int site = 1; site <= 3; ++site) {
    const Operator local = oracle::random_hermitian(3, rng);
    CHECK(max_abs(kron_embed(local, site, 3, 3) - oracle::embed(local, site - 1, 3)) < 1e-15);
  }
}

TEST_CASE("kron_embed: errors") {
  CHECK_THROWS_AS(kron_embed(identity(3), 0, 2, 3), InputError);
  CHECK_THROWS_AS(kron_embed(identity(3), 3, 2, 3), InputError);
  CHECK_THROWS_AS(kron_embed(identity(2), 1, 2, 3), InputError);
}

TEST_CASE("kron_embed: operators on different sites commute (20 random pairs)") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a = oracle::random_hermitian(3, rng);
    const Operator b = oracle::random_hermitian(3, rng);
    const int sa = 1 + trial % 3;
    const int sb = 1 + (trial + 1) % 3;
    CHECK(commutator_norm(kron_embed(a, sa, 3, 3), kron_embed(b, sb, 3, 3)) < 1e-12);
  }
}

TEST_CASE("eig_herm: simple spectra") {
  Operator d = Operator::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  const auto e = eig_herm(d);
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(2.0));
  CHECK(e.values(2) == doctest::Approx(3.0));

  const auto sx = eig_herm(spin1_ops().sx);
  CHECK(sx.values(0) == doctest::Approx(-1.0));
  CHECK(std::abs(sx.values(1)) < 1e-14);
  CHECK(sx.values(2) == doctest::Approx(1.0));
}

TEST_CASE("eig_herm: residual, orthonormality, reconstruction, Jacobi cross-check") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a = oracle::random_hermitian(9, rng, 5.0);
    const auto e = eig_herm(a);
    const double scale = max_abs(a);
    for (Eigen::Index k = 1; k < e.values.size(); ++k) CHECK(e.values(k) >= e.values(k - 1));
    CHECK(max_abs(a * e.vectors - e.vectors * e.values.cast<cplx>().asDiagonal()) <= 1e-8 * scale);
    CHECK(max_abs(e.vectors.adjoint() * e.vectors - identity(9)) <= 1e-8);
    CHECK(max_abs(a - e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint()) <=
          1e-8 * scale);
    const auto ref = oracle::jacobi_eigenvalues(a);
    for (int k = 0; k < 9; ++k) CHECK(std::abs(e.values(k) - ref[k]) <= 1e-10 * scale);
  }
}

TEST_CASE("eig_herm: rejects non-Hermitian input") {
  Operator a = identity(2);
  a(0, 1) = 1.0;
  CHECK_THROWS(eig_herm(a));
}

TEST_CASE("expm_mul: trivial generators") {
  std::mt19937 rng(5);
  const StateVector psi = oracle::random_state(9, rng);
  CHECK((expm_mul(Operator::Zero(9, 9), 0.37, psi) - psi).norm() == 0.0);

  const StateVector up = oracle::basis(3, 0);
  const StateVector out = expm_mul(spin1_ops().sz, std::numbers::pi, up);
  CHECK((out + up).norm() < 1e-14);
}

TEST_CASE("expm_mul: agrees with Taylor scaling-and-squaring oracle") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    // Frequencies at the scale of the chain models (~1e6 rad/s).
    const Operator h = oracle::random_hermitian(9, rng, 2e6);
    const StateVector psi = oracle::random_state(9, rng);
    const double dt = 1e-7;
    const StateVector ref = oracle::taylor_expm(cplx(0.0, -dt) * h) * psi;
    CHECK((expm_mul(h, dt, psi) - ref).norm() <= 1e-10);
  }
}

TEST_CASE("expm_mul: unitary for 50 random Hermitian generators") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const Operator h = oracle::random_hermitian(9, rng, 3.0);
    const StateVector psi = oracle::random_state(9, rng);
    CHECK(std::abs(expm_mul(h, 0.7, psi).norm() - 1.0) <= 1e-10);
  }
  CHECK_THROWS_AS(expm_mul(identity(3), 1.0, StateVector::Zero(9)), InputError);
}

TEST_CASE("fidelity_pure: examples") {
  const StateVector plus = ghz_state(2, +1);
  const StateVector minus = ghz_state(2, -1);
  CHECK(fidelity_pure(DensityMatrix::pure(plus), plus) == doctest::Approx(1.0));
  CHECK(fidelity_pure(DensityMatrix::maximally_mixed(9), plus) == doctest::Approx(1.0 / 9.0));
  CHECK(fidelity_pure(DensityMatrix::pure(minus), plus) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fidelity_pure(DensityMatrix::maximally_mixed(3), plus), InputError);

  Operator corrupted = Operator::Zero(9, 9);
  corrupted(0, 8) = cplx(0.0, 0.5);
  CHECK_THROWS_AS(fidelity_pure(DensityMatrix(corrupted), plus), NumericalError);
}

TEST_CASE("fidelity_pure: linear in rho and bounded") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector a = oracle::random_state(9, rng);
    const StateVector b = oracle::random_state(9, rng);
    const StateVector phi = oracle::random_state(9, rng);
    const double p = u(rng);
    const DensityMatrix mix(p * DensityMatrix::pure(a).entries() +
                            (1 - p) * DensityMatrix::pure(b).entries());
    const double f = fidelity_pure(mix, phi);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(f == doctest::Approx(p * fidelity_pure(a, phi) + (1 - p) * fidelity_pure(b, phi)).epsilon(1e-12));
  }
}

TEST_CASE("commutator_norm: examples") {
  const auto& s = spin1_ops();
  CHECK(commutator_norm(s.sz, s.sz2) == 0.0);
  // [Sx, Sz] computed by hand: entries of magnitude 1/sqrt2.
  CHECK(commutator_norm(s.sx, s.sz) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(commutator_norm(s.sx, s.sz) > 0.5);
  CHECK_THROWS_AS(commutator_norm(identity(3), identity(9)), InputError);
}

TEST_CASE("DensityMatrix: physicality checks") {
  const DensityMatrix pure = DensityMatrix::pure(ghz_state(2, +1));
  CHECK(pure.trace_error() < 1e-15);
  CHECK(pure.purity() == doctest::Approx(1.0));
  CHECK_NOTHROW(pure.check_physical());
  CHECK(DensityMatrix::maximally_mixed(9).purity() == doctest::Approx(1.0 / 9.0));

  Operator neg = Operator::Zero(2, 2);
  neg(0, 0) = 1.1;
  neg(1, 1) = -0.1;
  CHECK_THROWS_AS(DensityMatrix(neg).check_physical(), NumericalError);
  Operator bad_trace = 0.5 * identity(2);
  bad_trace(0, 0) = 0.6;
  CHECK_THROWS_AS(DensityMatrix(bad_trace).check_physical(), NumericalError);
}
