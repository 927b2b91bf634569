#pragma once

// Hamiltonian builders: conventional spin-1/2 annealing, the generic spin-1
// bifurcation driver and problem Hamiltonian, and the NV chain in the static,
// lab-frame driven and rotating-frame (RWA) forms.
//
// Pair sums run over each unordered pair {j, k} once with coefficient
// J(j, k). All rates are angular frequencies.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bqa/qop.hpp"
#include "bqa/schedules.hpp"

namespace bqa {

enum class Frame { Lab, Rwa };

const char* to_string(Frame f);
Frame frame_from_string(const std::string& s);

using CouplingMatrix = Eigen::MatrixXd;
using HamiltonianFn = std::function<Operator(double)>;

struct ChainSpec {
  int num_sites = 2;
  double d0 = 0.0;               // zero-field splitting D0
  std::vector<double> ex;        // per-site strain Ex^(j)
  CouplingMatrix j_ff;           // flip-flop J(j,k)
  CouplingMatrix j_zz;           // Ising J'(j,k)
  double b_amp = 0.0;            // drive peak B
  double sigma = 2e-5;           // Gaussian width
  double t_total = 1e-4;         // anneal time T
  double omega = 0.0;            // drive carrier at t = T/2
  double d0_prime_max = 0.0;     // detuning ramp amplitude D0'
  double gamma = 0.0;            // dephasing rate
  Frame frame = Frame::Rwa;

  Eigen::Index dim() const;
  void validate() const;
  Schedule schedule() const;
};

struct ProblemSpec {
  std::vector<double> h;   // longitudinal fields h_j
  CouplingMatrix j;        // symmetric, zero diagonal
};

// J(j,k) = j_nn / |j-k|^exponent.
CouplingMatrix dipolar_couplings(double j_nn, int num_sites, double exponent = 3.0);

// sum_j h_j sigz^(j) + sum_{i<j} J_ij sigz^(i) sigz^(j)
Operator build_problem_spin_half(const ProblemSpec& p, int num_sites);
// sum_j B_j sigx^(j)
Operator build_driver_spin_half(std::span<const double> fields, int num_sites);
// (1 - s) H_D + s H_P
Operator total_spin_half(const ProblemSpec& p, std::span<const double> fields, int num_sites,
                         double s);

// sum_j A sx^(j) + C sz2^(j)
Operator build_bifurcation_driver(double a, double c, int num_sites);
// sum_j h_j sz^(j) + sum_{i<j} J_ij sz^(i) sz^(j)
Operator build_problem_spin1(const ProblemSpec& p, int num_sites);

// Precomputed term operators of one NV chain; evaluating H(t) is then a few
// scaled matrix sums.
class ChainHamiltonian {
 public:
  explicit ChainHamiltonian(ChainSpec spec);

  const ChainSpec& spec() const { return spec_; }
  const Schedule& schedule() const { return schedule_; }

  // sum_j D0 sz2 + Ex (sx^2 - sy^2) + sum_{j<k} J (sx sx + sy sy) - J' sz sz
  Operator nv_static() const;
  // nv_static + 2 lambda(t) cos(phase(t)) sum_j sx
  Operator lab(double t) const;
  // sum_j D'(t) sz2 + lambda(t) sx + Ex (sx^2 - sy^2)
  //   + sum_{j<k} J (|B0><0B| + |D0><0D| + h.c.) - J' sz sz
  Operator rwa(double t) const;
  Operator at(double t, Frame frame) const;

  // Rotating-frame (Sz)^2 coefficient: (D0 - omega) + D'(t).
  double rwa_detuning(double t) const;
  // Lab-frame coefficient multiplying sum_j sx.
  double lab_drive_coefficient(double t) const;

  // Hamiltonian as a function of time for the dynamics engines.
  HamiltonianFn function(Frame frame) const;

 private:
  ChainSpec spec_;
  Schedule schedule_;
  Operator sum_sz2_;
  Operator sum_sx_;
  Operator strain_;
  Operator ising_;       // sum J' sz sz, enters with a minus sign
  Operator flipflop_lab_;
  Operator flipflop_rwa_;
};

Operator build_nv_static(const ChainSpec& spec);
Operator build_lab_frame(const ChainSpec& spec, double t);
Operator build_rwa_frame(const ChainSpec& spec, double t);

// Sz embeddings on every site, the dephasing jump operators.
std::vector<Operator> dephasing_jump_ops(int num_sites);

}  // namespace bqa
