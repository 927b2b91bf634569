#pragma once

// Time evolution: Schrodinger propagation of pure states, GKSL propagation of
// density matrices, observable recording, and a fine-grid reference
// propagator used for verification.

#include <limits>
#include <span>
#include <vector>

#include "bqa/hamiltonians.hpp"
#include "bqa/qop.hpp"

namespace bqa {

enum class Integrator {
  Midpoint,    // exp(-i H(t + dt/2) dt) per step
  Magnus4,     // fourth-order commutator-free Magnus, two exponentials per step
  AdaptiveRk,  // Dormand-Prince 5(4) with local error control
};

const char* to_string(Integrator i);
Integrator integrator_from_string(const std::string& s);

struct EvolveOptions {
  int n_steps = 4000;  // fixed-step integrators
  int n_out = 101;     // samples including t = 0 and t = T
  Integrator integrator = Integrator::Midpoint;
  // Largest admissible step; the lab frame needs >= 20 steps per drive period.
  double max_step = std::numeric_limits<double>::infinity();
  double rk_rel_tol = 1e-12;
  double rk_abs_tol = 1e-14;
  // Throw NumericalError when a sampled density matrix leaves the physical
  // tolerances below.
  bool enforce_physicality = true;
  double trace_tol = 1e-7;
  double hermitian_tol = 1e-9;
  double min_eig_tol = -1e-7;

  void validate(double t_total) const;
  double step(double t_total) const { return t_total / n_steps; }
};

// Lab-frame step bound: (2 pi / omega) / 20.
double lab_frame_max_step(double omega);

// Observation targets for an L-site spin-1 chain.
struct Targets {
  int num_sites = 0;
  StateVector ghz_plus;
  StateVector ghz_minus;
  StateVector all_zero;
  Operator parity;

  static Targets for_chain(int num_sites);
};

struct Sample {
  double t = 0.0;
  double fidelity_plus = 0.0;
  double fidelity_minus = 0.0;
  double parity_expect = 0.0;
  double purity = 1.0;
  double pop_all_zero = 0.0;
  double pop_ghz_manifold = 0.0;
  // physicality witnesses
  double norm_error = 0.0;        // | ||psi|| - 1 | or |Tr rho - 1|
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double parity_asymmetry = 0.0;  // ||P rho P - rho||_max
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> fidelity_plus;
  std::vector<double> fidelity_minus;
  std::vector<double> parity_expect;
  std::vector<double> purity;
  std::vector<double> pop_all_zero;
  std::vector<double> pop_ghz_manifold;
  std::vector<double> norm_error;
  std::vector<double> hermiticity_error;
  std::vector<double> min_eigenvalue;
  std::vector<double> parity_asymmetry;

  void push(const Sample& s);
  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  double final_fidelity() const;
};

Sample record_observables(const StateVector& psi, const Targets& targets, double t);
Sample record_observables(const DensityMatrix& rho, const Targets& targets, double t);

struct PureEvolution {
  Trajectory trajectory;
  StateVector final_state;
};

struct MixedEvolution {
  Trajectory trajectory;
  DensityMatrix final_state;
};

// Pass targets = nullptr to record only the sample times (e.g. spin-1/2 runs).
PureEvolution evolve_schrodinger(const HamiltonianFn& hamiltonian, const StateVector& psi0,
                                 double t_total, const EvolveOptions& opts,
                                 const Targets* targets);

MixedEvolution evolve_lindblad(const HamiltonianFn& hamiltonian, const DensityMatrix& rho0,
                               std::span<const Operator> jump_ops, double gamma,
                               double t_total, const EvolveOptions& opts,
                               const Targets* targets);

// Piecewise-constant exponentials on a uniform grid of n_fine cells, each
// cell using H at its centre and a Taylor-series exponential.
StateVector oracle_propagate(const HamiltonianFn& hamiltonian, const StateVector& psi0,
                             double t_total, int n_fine);

// Lowest eigenvector of H within the parity sector P = sector_sign.
StateVector instantaneous_ground_state(const Operator& h, const Operator& parity,
                                       int sector_sign);

}  // namespace bqa
