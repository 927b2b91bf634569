#include <doctest.h>

#include <cmath>
#include <random>

#include "bqa/qop.hpp"
#include "bqa/schedules.hpp"

using namespace bqa;

namespace {

Schedule nv_schedule() {
  Schedule s;
  s.t_total = 1e-4;
  s.sigma = 0.2e-4;
  s.d0_prime_max = 1.25e6;
  s.b_amp = 2.1e6;
  return s;
}

}  // namespace

TEST_CASE("detuning: endpoints and midpoint") {
  const Schedule s = nv_schedule();
  CHECK(detuning(s, 0.0) == doctest::Approx(s.d0_prime_max));
  CHECK(std::abs(detuning(s, 0.5 * s.t_total)) < 1e-9);
  CHECK(detuning(s, s.t_total) == doctest::Approx(-s.d0_prime_max));
}

TEST_CASE("detuning: odd about T/2") {
  const Schedule s = nv_schedule();
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 0.5 * s.t_total);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng);
    CHECK(detuning(s, 0.5 * s.t_total + x) == doctest::Approx(-detuning(s, 0.5 * s.t_total - x)));
  }
}

TEST_CASE("drive_amp: peak, tail and symmetry") {
  const Schedule s = nv_schedule();
  CHECK(drive_amp(s, 0.5 * s.t_total) == doctest::Approx(s.b_amp));
  CHECK(drive_amp(s, 0.0) == doctest::Approx(s.b_amp * std::exp(-6.25)));
  CHECK(drive_amp(s, 0.0) / s.b_amp == doctest::Approx(1.93e-3).epsilon(0.01));
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, s.t_total);
  for (int i = 0; i < 50; ++i) {
    const double t = u(rng);
    CHECK(drive_amp(s, t) == doctest::Approx(drive_amp(s, s.t_total - t)));
    CHECK(drive_amp(s, t) > 0.0);
  }
}

TEST_CASE("schedules reject times outside [0, T]") {
  const Schedule s = nv_schedule();
  CHECK_THROWS_AS(detuning(s, -1e-6), InputError);
  CHECK_THROWS_AS(drive_amp(s, 1.01 * s.t_total), InputError);
  CHECK_THROWS_AS(generic_bifurcation(s, 2 * s.t_total), InputError);
  CHECK_THROWS_AS(linear_ramp(-0.1, 1.0), InputError);
  CHECK_THROWS_AS(linear_ramp(1.1, 1.0), InputError);
  Schedule bad = s;
  bad.sigma = 0.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("drive_phase: carrier phase and instantaneous frequency") {
  const Schedule s = nv_schedule();
  const double omega = 2.5e8;
  const double half = 0.5 * s.t_total;
  CHECK(drive_phase(s, omega, half) == doctest::Approx(omega * half));
  // d(phase)/dt = omega - D'(t)
  for (double t : {0.1e-4, 0.3e-4, 0.8e-4}) {
    const double h = 1e-9;
    const double rate = (drive_phase(s, omega, t + h) - drive_phase(s, omega, t - h)) / (2 * h);
    CHECK(rate == doctest::Approx(omega - detuning(s, t)).epsilon(1e-9));
  }
}

TEST_CASE("generic_bifurcation: endpoints and centre") {
  Schedule s;
  s.kind = ScheduleKind::GenericBifurcation;
  s.t_total = 1.0;
  s.sigma = 0.1;
  s.a_peak = 0.3;
  s.c_amp = 50.0;
  const auto start = generic_bifurcation(s, 0.0);
  const auto mid = generic_bifurcation(s, 0.5);
  const auto end = generic_bifurcation(s, 1.0);
  CHECK(start.c == doctest::Approx(50.0));
  CHECK(start.a < 1e-10);
  CHECK(mid.a == doctest::Approx(0.3));
  CHECK(std::abs(mid.c) < 1e-12);
  CHECK(end.c == doctest::Approx(-50.0));
  CHECK(end.a < 1e-10);
}

TEST_CASE("linear_ramp") {
  CHECK(linear_ramp(0.0, 2.0) == 0.0);
  CHECK(linear_ramp(2.0, 2.0) == 1.0);
  CHECK(linear_ramp(0.5, 2.0) == doctest::Approx(0.25));
}
