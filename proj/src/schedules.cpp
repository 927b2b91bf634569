#include "bqa/schedules.hpp"

#include <cmath>
#include <string>

#include "bqa/qop.hpp"

namespace bqa {

namespace {

// Slack for round-off at the endpoints (t computed as k * dt).
constexpr double kEdgeSlack = 1e-12;

void check_time(double t, double t_total, const char* what) {
  const double slack = kEdgeSlack * t_total;
  if (!(t >= -slack && t <= t_total + slack)) {
    throw InputError(std::string(what) + ": t = " + std::to_string(t) +
                     " outside [0, " + std::to_string(t_total) + "]");
  }
}

double gaussian(double peak, double sigma, double t, double t_total) {
  const double x = (t - 0.5 * t_total) / sigma;
  return peak * std::exp(-x * x);
}

}  // namespace

void Schedule::validate() const {
  if (!(t_total > 0.0) || !std::isfinite(t_total)) throw InputError("schedule: t_total must be > 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("schedule: sigma must be > 0");
}

double detuning(const Schedule& s, double t) {
  check_time(t, s.t_total, "detuning");
  return -2.0 * s.d0_prime_max * (t - 0.5 * s.t_total) / s.t_total;
}

double drive_amp(const Schedule& s, double t) {
  check_time(t, s.t_total, "drive_amp");
  return gaussian(s.b_amp, s.sigma, t, s.t_total);
}

double drive_phase(const Schedule& s, double omega_center, double t) {
  check_time(t, s.t_total, "drive_phase");
  const double x = t - 0.5 * s.t_total;
  return omega_center * t + s.d0_prime_max * x * x / s.t_total;
}

BifurcationPair generic_bifurcation(const Schedule& s, double t) {
  check_time(t, s.t_total, "generic_bifurcation");
  const double c = s.c_amp * (1.0 - 2.0 * t / s.t_total);
  return {gaussian(s.a_peak, s.sigma, t, s.t_total), c};
}

double linear_ramp(double t, double t_total) {
  if (!(t_total > 0.0)) throw InputError("linear_ramp: t_total must be > 0");
  check_time(t, t_total, "linear_ramp");
  const double s = t / t_total;
  return s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
}

}  // namespace bqa
