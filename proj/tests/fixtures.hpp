#pragma once

// Parameter sets shared by the tests, built directly in angular units.

#include <numbers>
#include <vector>

#include "bqa/hamiltonians.hpp"

namespace fixture {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double hz(double f) { return kTwoPi * f; }

// Nearest-neighbour J12 = 30 kHz, J'12 = 60 kHz with the 1/r^3 tail.
inline bqa::ChainSpec base_chain(int num_sites) {
  bqa::ChainSpec c;
  c.num_sites = num_sites;
  c.d0 = hz(40e6);
  c.omega = hz(40e6);
  c.t_total = 1e-4;
  c.sigma = 0.2 * c.t_total;
  c.ex.assign(num_sites, 0.0);
  c.j_ff = num_sites > 1 ? bqa::dipolar_couplings(hz(30e3), num_sites) : bqa::CouplingMatrix::Zero(1, 1);
  c.j_zz = num_sites > 1 ? bqa::dipolar_couplings(hz(60e3), num_sites) : bqa::CouplingMatrix::Zero(1, 1);
  return c;
}

// Energy-diagram parameter set: L = 2, D0' = 400 kHz, B = 100 kHz,
// Ex = (1, 1.2) kHz.
inline bqa::ChainSpec spectrum_chain() {
  bqa::ChainSpec c = base_chain(2);
  c.d0_prime_max = hz(400e3);
  c.b_amp = hz(100e3);
  c.ex = {hz(1e3), hz(1.2e3)};
  return c;
}

// Anneal parameter set: D0' = 200 kHz, B = 340 kHz, strains Ex^(1) * ratios.
inline bqa::ChainSpec anneal_chain(int num_sites, double ex1_hz, std::vector<double> ratios,
                                   double gamma = 0.0) {
  bqa::ChainSpec c = base_chain(num_sites);
  c.d0_prime_max = hz(200e3);
  c.b_amp = hz(340e3);
  c.ex[0] = hz(ex1_hz);
  for (int s = 1; s < num_sites; ++s) c.ex[s] = c.ex[s - 1] * ratios[s - 1];
  c.gamma = gamma;
  return c;
}

}  // namespace fixture
