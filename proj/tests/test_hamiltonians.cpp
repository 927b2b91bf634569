#include <doctest.h>

#include <array>
#include <limits>
#include <random>

#include "bqa/hamiltonians.hpp"
#include "bqa/spin.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bqa;
using fixture::hz;

namespace {

Operator diag_of(std::initializer_list<double> d) {
  RealVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<cplx>().asDiagonal();
}

ProblemSpec random_problem(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ProblemSpec p;
  p.h.resize(n);
  for (double& h : p.h) h = u(rng);
  p.j = CouplingMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) p.j(a, b) = p.j(b, a) = u(rng);
  return p;
}

// Classical energy of spin values s_j for one unordered-pair sum.
double classical_energy(const ProblemSpec& p, const std::vector<int>& s) {
  double e = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    e += p.h[a] * s[a];
    for (std::size_t b = a + 1; b < s.size(); ++b) e += p.j(a, b) * s[a] * s[b];
  }
  return e;
}

// Number of sites in |+1> or |-1> for a spin-1 basis index.
int excitations(Eigen::Index index, int n) {
  int count = 0;
  for (int m : product_labels(index, n)) count += m != 0;
  return count;
}

}  // namespace

TEST_CASE("build_problem_spin_half: examples") {
  ProblemSpec p1{{1.0}, CouplingMatrix::Zero(1, 1)};
  CHECK(max_abs(build_problem_spin_half(p1, 1) - diag_of({1, -1})) == 0.0);

  ProblemSpec p2{{0.0, 0.0}, CouplingMatrix::Zero(2, 2)};
  p2.j(0, 1) = p2.j(1, 0) = 1.0;
  CHECK(max_abs(build_problem_spin_half(p2, 2) - diag_of({1, -1, -1, 1})) == 0.0);
  CHECK_THROWS_AS(build_problem_spin_half(p2, 3), InputError);
}

TEST_CASE("build_problem_spin_half: ground state matches enumeration") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const ProblemSpec p = random_problem(3, rng);
    const Operator h = build_problem_spin_half(p, 3);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 8; ++k) {
      // basis index bit = 0 -> sigma_z = +1
      std::vector<int> s{(k >> 2) & 1 ? -1 : 1, (k >> 1) & 1 ? -1 : 1, k & 1 ? -1 : 1};
      const double e = classical_energy(p, s);
      CHECK(h(k, k).real() == doctest::Approx(e));
      best = std::min(best, e);
    }
    CHECK(eig_herm(h).values(0) == doctest::Approx(best));
  }
}

TEST_CASE("build_driver_spin_half: examples") {
  const std::array<double, 1> one{1.0};
  const Operator d1 = build_driver_spin_half(one, 1);
  CHECK(max_abs(d1 - spin_half_ops().sigx) == 0.0);
  const std::array<double, 2> two{1.0, 1.0};
  const auto e = eig_herm(build_driver_spin_half(two, 2));
  CHECK(e.values(0) == doctest::Approx(-2.0));
  StateVector minus(2);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const StateVector expected = oracle::kron(minus, minus);
  CHECK(std::abs(expected.dot(e.vectors.col(0))) == doctest::Approx(1.0));
}

TEST_CASE("total_spin_half: exact endpoints and linearity") {
  std::mt19937 rng(43);
  const ProblemSpec p = random_problem(2, rng);
  const std::array<double, 2> b{0.7, 1.3};
  const Operator hd = build_driver_spin_half(b, 2);
  const Operator hp = build_problem_spin_half(p, 2);
  CHECK(max_abs(total_spin_half(p, b, 2, 0.0) - hd) == 0.0);
  CHECK(max_abs(total_spin_half(p, b, 2, 1.0) - hp) == 0.0);
  CHECK(max_abs(total_spin_half(p, b, 2, 0.5) - 0.5 * (hd + hp)) < 1e-15);
  CHECK_THROWS_AS(total_spin_half(p, b, 2, 1.5), InputError);
}

TEST_CASE("build_bifurcation_driver and build_problem_spin1") {
  const auto& s = spin1_ops();
  CHECK(max_abs(build_bifurcation_driver(0.3, 2.0, 1) - (0.3 * s.sx + 2.0 * s.sz2)) < 1e-15);
  const Operator two = build_bifurcation_driver(0.3, 2.0, 2);
  CHECK(max_abs(two - (oracle::embed(0.3 * s.sx + 2.0 * s.sz2, 0, 2) +
                       oracle::embed(0.3 * s.sx + 2.0 * s.sz2, 1, 2))) < 1e-15);

  ProblemSpec p1{{1.0}, CouplingMatrix::Zero(1, 1)};
  CHECK(max_abs(build_problem_spin1(p1, 1) - diag_of({1, 0, -1})) == 0.0);

  ProblemSpec p2{{0.0, 0.0}, CouplingMatrix::Zero(2, 2)};
  p2.j(0, 1) = p2.j(1, 0) = 2.5;
  const Operator h = build_problem_spin1(p2, 2);
  for (Eigen::Index k = 0; k < 9; ++k) {
    const auto m = product_labels(k, 2);
    CHECK(h(k, k).real() == doctest::Approx(2.5 * m[0] * m[1]));
  }
  CHECK(max_abs(h - Operator(h.diagonal().asDiagonal())) == 0.0);

  std::mt19937 rng(47);
  const ProblemSpec p = random_problem(2, rng);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < 9; ++k) best = std::min(best, classical_energy(p, product_labels(k, 2)));
  CHECK(eig_herm(build_problem_spin1(p, 2)).values(0) == doctest::Approx(best));
}

TEST_CASE("dipolar_couplings") {
  const CouplingMatrix j3 = dipolar_couplings(8.0, 3);
  CHECK(j3(0, 2) / j3(0, 1) == doctest::Approx(1.0 / 8.0));
  CHECK(j3(1, 2) == doctest::Approx(8.0));
  CHECK(j3(0, 0) == 0.0);
  CHECK(j3(2, 0) == j3(0, 2));
  const CouplingMatrix j2 = dipolar_couplings(3.0, 2);
  CHECK(j2(0, 1) == 3.0);
  CHECK(j2(1, 0) == 3.0);
  CHECK(dipolar_couplings(27.0, 4)(0, 3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(dipolar_couplings(1.0, 1), InputError);
}

TEST_CASE("build_nv_static: single-site examples") {
  ChainSpec c = fixture::base_chain(1);
  c.d0 = 1.0;
  CHECK(max_abs(build_nv_static(c) - diag_of({1, 0, 1})) < 1e-15);
  c.d0 = 0.0;
  c.ex = {1.0};
  Operator expected = Operator::Zero(3, 3);
  expected(0, 2) = expected(2, 0) = 1.0;
  CHECK(max_abs(build_nv_static(c) - expected) < 1e-15);
}

TEST_CASE("build_nv_static: L=2 agrees with a hand-assembled operator") {
  ChainSpec c = fixture::spectrum_chain();
  const double j = c.j_ff(0, 1), jp = c.j_zz(0, 1);
  const oracle::Mat sx = oracle::sx(), sy = oracle::sy(), sz = oracle::sz();
  const oracle::Mat strain = sx * sx - sy * sy;
  const oracle::Mat ref = c.d0 * (oracle::embed(sz * sz, 0, 2) + oracle::embed(sz * sz, 1, 2)) +
                          c.ex[0] * oracle::embed(strain, 0, 2) +
                          c.ex[1] * oracle::embed(strain, 1, 2) +
                          j * (oracle::kron(sx, sx) + oracle::kron(sy, sy)) -
                          jp * oracle::kron(sz, sz);
  const Operator h = build_nv_static(c);
  CHECK(max_abs(h - ref) <= 1e-12 * max_abs(ref));
  const auto ours = eig_herm(h).values;
  const auto jac = oracle::jacobi_eigenvalues(ref);
  for (int k = 0; k < 9; ++k) CHECK(std::abs(ours(k) - jac[k]) <= 1e-9 * max_abs(ref));
}

TEST_CASE("build_lab_frame: drive term") {
  ChainSpec c = fixture::spectrum_chain();
  ChainSpec undriven = c;
  undriven.b_amp = 0.0;
  CHECK(max_abs(build_lab_frame(undriven, 0.37e-4) - build_nv_static(undriven)) == 0.0);

  ChainSpec single = fixture::base_chain(1);
  single.b_amp = hz(100e3);
  single.d0_prime_max = hz(400e3);
  const double half = 0.5 * single.t_total;
  const ChainHamiltonian model(single);
  const double coefficient = 2.0 * single.b_amp * std::cos(single.omega * half);
  CHECK(model.lab_drive_coefficient(half) == doctest::Approx(coefficient));
  const Operator drive = build_lab_frame(single, half) - build_nv_static(single);
  CHECK(max_abs(drive - coefficient * spin1_ops().sx) <= 1e-9 * std::abs(coefficient) + 1e-6);

  std::mt19937 rng(53);
  std::uniform_real_distribution<double> u(0.0, c.t_total);
  for (int i = 0; i < 100; ++i) CHECK(hermiticity_error(build_lab_frame(c, u(rng))) == 0.0);
  CHECK_THROWS_AS(build_lab_frame(c, 2 * c.t_total), InputError);
}

TEST_CASE("build_rwa_frame: single-site detuning example") {
  ChainSpec c = fixture::base_chain(1);
  c.omega = c.d0 - 1.0;  // D' = D0 - omega = 1 with no ramp
  CHECK(max_abs(build_rwa_frame(c, 0.3e-4) - diag_of({1, 0, 1})) < 1e-6);
  CHECK_THROWS_AS(build_rwa_frame(c, -c.t_total), InputError);
}

TEST_CASE("build_rwa_frame: exchange keeps exactly the excitation-conserving part") {
  ChainSpec c = fixture::base_chain(2);
  const double j = c.j_ff(0, 1);
  const ChainHamiltonian model(c);
  const Operator h = build_rwa_frame(c, 0.0);
  const auto& s = spin1_ops();
  const StateVector b0 = oracle::kron(s.bright, s.zero), zb = oracle::kron(s.zero, s.bright);
  const StateVector d0 = oracle::kron(s.dark, s.zero), zd = oracle::kron(s.zero, s.dark);
  CHECK(std::abs(b0.dot(h * zb) - j) < 1e-6);
  CHECK(std::abs(d0.dot(h * zd) - j) < 1e-6);

  // Oracle: the full flip-flop operator restricted to elements between basis
  // states of equal excitation number (the non-rotating part).
  const oracle::Mat full = j * (oracle::kron(oracle::sx(), oracle::sx()) +
                                oracle::kron(oracle::sy(), oracle::sy()));
  oracle::Mat kept = oracle::Mat::Zero(9, 9);
  for (Eigen::Index r = 0; r < 9; ++r)
    for (Eigen::Index col = 0; col < 9; ++col)
      if (excitations(r, 2) == excitations(col, 2)) kept(r, col) = full(r, col);
  // Remove everything but the exchange term from the model Hamiltonian.
  ChainSpec bare = c;
  bare.j_ff.setZero();
  const Operator exchange = h - build_rwa_frame(bare, 0.0);
  CHECK(max_abs(exchange - kept) < 1e-9 * j);
  // The dropped |BB><00| family is nonzero in the lab operator.
  CHECK(max_abs(full - kept) > 0.1 * j);
}

TEST_CASE("build_rwa_frame / build_lab_frame: parity symmetry at 50 random times") {
  const ChainSpec c = fixture::spectrum_chain();
  const Operator p = parity_op(2);
  std::mt19937 rng(59);
  std::uniform_real_distribution<double> u(0.0, c.t_total);
  for (int i = 0; i < 50; ++i) {
    const double t = u(rng);
    const Operator hr = build_rwa_frame(c, t);
    const Operator hl = build_lab_frame(c, t);
    CHECK(hermiticity_error(hr) <= 1e-12 * max_abs(hr));
    CHECK(commutator_norm(hr, p) < 1e-10 * std::max(1.0, max_abs(hr)) + 1e-10);
    CHECK(commutator_norm(hl, p) < 1e-10 * std::max(1.0, max_abs(hl)) + 1e-10);
  }
}

TEST_CASE("build_rwa_frame at T without drive and strain: GHZ pair lowest") {
  ChainSpec c = fixture::spectrum_chain();
  c.b_amp = 0.0;
  c.ex = {0.0, 0.0};
  const Operator h = build_rwa_frame(c, c.t_total);
  const auto e = eig_herm(h);
  const Operator low = e.vectors.leftCols(2);
  for (int sign : {+1, -1}) {
    const StateVector g = ghz_state(2, sign);
    CHECK((low.adjoint() * g).squaredNorm() >= 1.0 - 1e-3);
  }
  // Diagonal energy of |+1,+1>: 2 D' - J' = -2 pi (800 + 60) kHz.
  CHECK(h(0, 0).real() == doctest::Approx(-hz(860e3)).epsilon(1e-9));
  CHECK(h(8, 8).real() == doctest::Approx(-hz(860e3)).epsilon(1e-9));
}

TEST_CASE("ChainHamiltonian::function matches the free builders") {
  const ChainSpec c = fixture::spectrum_chain();
  const ChainHamiltonian model(c);
  const auto lab = model.function(Frame::Lab);
  const auto rwa = model.function(Frame::Rwa);
  for (double t : {0.0, 0.21e-4, 0.5e-4, 1e-4}) {
    CHECK(max_abs(lab(t) - build_lab_frame(c, t)) == 0.0);
    CHECK(max_abs(rwa(t) - build_rwa_frame(c, t)) == 0.0);
  }
}

TEST_CASE("ChainSpec validation and jump operators") {
  ChainSpec c = fixture::spectrum_chain();
  c.j_ff(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(c.validate(), InputError);
  ChainSpec d = fixture::spectrum_chain();
  d.sigma = -1.0;
  CHECK_THROWS_AS(d.validate(), InputError);
  ChainSpec e = fixture::spectrum_chain();
  e.ex = {1.0};
  CHECK_THROWS_AS(e.validate(), InputError);

  const auto jumps = dephasing_jump_ops(2);
  REQUIRE(jumps.size() == 2);
  CHECK(max_abs(jumps[1] - oracle::embed(oracle::sz(), 1, 2)) == 0.0);
  CHECK(frame_from_string("lab") == Frame::Lab);
  CHECK_THROWS_AS(frame_from_string("moving"), InputError);
}
