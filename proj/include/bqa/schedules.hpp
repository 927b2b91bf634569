#pragma once

// Time-dependent control functions on [0, T]. All rates are angular
// frequencies (rad/s), all times in seconds.

namespace bqa {

enum class ScheduleKind { NvBifurcation, GenericBifurcation, Linear };

struct Schedule {
  ScheduleKind kind = ScheduleKind::NvBifurcation;
  double t_total = 1e-4;       // T
  double d0_prime_max = 0.0;   // D0', amplitude of the detuning ramp
  double b_amp = 0.0;          // B, peak of the Gaussian drive envelope
  double sigma = 2e-5;         // Gaussian width
  // generic bifurcation pair (A(t), C(t))
  double a_peak = 0.0;         // A0
  double c_amp = 0.0;          // C0

  void validate() const;
};

struct BifurcationPair {
  double a;  // transverse amplitude A(t)
  double c;  // (Sz)^2 coefficient C(t)
};

// D'(t) = -2 D0' (t - T/2) / T
double detuning(const Schedule& s, double t);

// lambda_x(t) = B exp(-(t - T/2)^2 / sigma^2)
double drive_amp(const Schedule& s, double t);

// Carrier phase of a drive whose instantaneous frequency is
// omega_center - D'(t), zeroed so that phase(T/2) = omega_center T/2:
//   phase(t) = omega_center t - integral_{T/2}^{t} D'(u) du.
double drive_phase(const Schedule& s, double omega_center, double t);

// C(t) linear from +C0 to -C0, A(t) a Gaussian bump of peak A0 and width
// sigma centred at T/2.
BifurcationPair generic_bifurcation(const Schedule& s, double t);

// s = t / T.
double linear_ramp(double t, double t_total);

}  // namespace bqa
