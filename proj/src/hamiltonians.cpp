#include "bqa/hamiltonians.hpp"

#include <cmath>
#include <string>

#include "bqa/spin.hpp"

namespace bqa {

const char* to_string(Frame f) { return f == Frame::Lab ? "lab" : "rwa"; }

Frame frame_from_string(const std::string& s) {
  if (s == "lab") return Frame::Lab;
  if (s == "rwa") return Frame::Rwa;
  throw InputError("frame must be 'lab' or 'rwa' (got '" + s + "')");
}

namespace {

void check_couplings(const CouplingMatrix& j, int n, const char* name) {
  if (j.rows() != n || j.cols() != n) {
    throw InputError(std::string(name) + ": coupling matrix must be " + std::to_string(n) +
                     "x" + std::to_string(n));
  }
  for (int a = 0; a < n; ++a) {
    if (j(a, a) != 0.0) throw InputError(std::string(name) + ": diagonal must be zero");
    for (int b = a + 1; b < n; ++b) {
      if (std::abs(j(a, b) - j(b, a)) > 1e-12 * std::max(1.0, std::abs(j(a, b)))) {
        throw InputError(std::string(name) + ": coupling matrix must be symmetric");
      }
    }
  }
}

void check_problem(const ProblemSpec& p, int n) {
  if (n < 1) throw InputError("num_sites must be >= 1");
  if (static_cast<int>(p.h.size()) != n) throw InputError("problem: h has wrong length");
  if (p.j.size() == 0 && n == 1) return;
  check_couplings(p.j, n, "problem.j");
}

// Diagonal Ising-type Hamiltonian sum h z + sum_{i<j} J z z for any local z.
Operator diagonal_problem(const ProblemSpec& p, int n, const Operator& z, Eigen::Index d) {
  check_problem(p, n);
  Operator h = Operator::Zero(ipow(d, n), ipow(d, n));
  for (int s = 0; s < n; ++s) {
    if (p.h[s] != 0.0) h += p.h[s] * kron_embed(z, s + 1, n, d);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (p.j.size() != 0 && p.j(a, b) != 0.0) {
        h += p.j(a, b) * kron_embed_pair(z, a + 1, z, b + 1, n, d);
      }
    }
  }
  return h;
}

Operator sum_local(const Operator& op, int n) {
  Operator out = Operator::Zero(ipow(kSpin1Dim, n), ipow(kSpin1Dim, n));
  for (int s = 1; s <= n; ++s) out += kron_embed(op, s, n, kSpin1Dim);
  return out;
}

}  // namespace

Eigen::Index ChainSpec::dim() const { return ipow(kSpin1Dim, num_sites); }

void ChainSpec::validate() const {
  if (num_sites < 1) throw InputError("chain: num_sites must be >= 1");
  if (static_cast<int>(ex.size()) != num_sites) {
    throw InputError("chain: ex must have one entry per site");
  }
  check_couplings(j_ff, num_sites, "chain.j_ff");
  check_couplings(j_zz, num_sites, "chain.j_zz");
  if (!(t_total > 0.0)) throw InputError("chain: t_total must be > 0");
  if (!(sigma > 0.0)) throw InputError("chain: sigma must be > 0");
  if (gamma < 0.0) throw InputError("chain: gamma must be >= 0");
}

Schedule ChainSpec::schedule() const {
  Schedule s;
  s.kind = ScheduleKind::NvBifurcation;
  s.t_total = t_total;
  s.d0_prime_max = d0_prime_max;
  s.b_amp = b_amp;
  s.sigma = sigma;
  return s;
}

CouplingMatrix dipolar_couplings(double j_nn, int num_sites, double exponent) {
  if (num_sites < 2) throw InputError("dipolar_couplings: need at least two sites");
  CouplingMatrix j = CouplingMatrix::Zero(num_sites, num_sites);
  for (int a = 0; a < num_sites; ++a) {
    for (int b = 0; b < num_sites; ++b) {
      if (a != b) j(a, b) = j_nn / std::pow(std::abs(a - b), exponent);
    }
  }
  return j;
}

Operator build_problem_spin_half(const ProblemSpec& p, int num_sites) {
  return diagonal_problem(p, num_sites, spin_half_ops().sigz, kSpinHalfDim);
}

Operator build_driver_spin_half(std::span<const double> fields, int num_sites) {
  if (num_sites < 1 || static_cast<int>(fields.size()) != num_sites) {
    throw InputError("driver: need one transverse field per site");
  }
  const Eigen::Index dim = ipow(kSpinHalfDim, num_sites);
  Operator h = Operator::Zero(dim, dim);
  for (int s = 0; s < num_sites; ++s) {
    h += fields[s] * kron_embed(spin_half_ops().sigx, s + 1, num_sites, kSpinHalfDim);
  }
  return h;
}

Operator total_spin_half(const ProblemSpec& p, std::span<const double> fields, int num_sites,
                         double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw InputError("total_spin_half: s must lie in [0, 1]");
  const Operator hd = build_driver_spin_half(fields, num_sites);
  const Operator hp = build_problem_spin_half(p, num_sites);
  if (s == 0.0) return hd;
  if (s == 1.0) return hp;
  return (1.0 - s) * hd + s * hp;
}

Operator build_bifurcation_driver(double a, double c, int num_sites) {
  if (num_sites < 1) throw InputError("num_sites must be >= 1");
  const Spin1Ops& ops = spin1_ops();
  return sum_local(a * ops.sx + c * ops.sz2, num_sites);
}

Operator build_problem_spin1(const ProblemSpec& p, int num_sites) {
  return diagonal_problem(p, num_sites, spin1_ops().sz, kSpin1Dim);
}

ChainHamiltonian::ChainHamiltonian(ChainSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  schedule_ = spec_.schedule();
  const int n = spec_.num_sites;
  const Eigen::Index dim = spec_.dim();
  const Spin1Ops& ops = spin1_ops();

  sum_sz2_ = sum_local(ops.sz2, n);
  sum_sx_ = sum_local(ops.sx, n);
  strain_ = Operator::Zero(dim, dim);
  for (int s = 0; s < n; ++s) {
    if (spec_.ex[s] != 0.0) strain_ += spec_.ex[s] * kron_embed(ops.strain(), s + 1, n, kSpin1Dim);
  }

  const Operator b0 = ops.bright * ops.zero.adjoint();  // |B><0|
  const Operator d0 = ops.dark * ops.zero.adjoint();    // |D><0|
  ising_ = Operator::Zero(dim, dim);
  flipflop_lab_ = Operator::Zero(dim, dim);
  flipflop_rwa_ = Operator::Zero(dim, dim);
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      const double jzz = spec_.j_zz(a - 1, b - 1);
      const double jff = spec_.j_ff(a - 1, b - 1);
      if (jzz != 0.0) ising_ += jzz * kron_embed_pair(ops.sz, a, ops.sz, b, n, kSpin1Dim);
      if (jff != 0.0) {
        flipflop_lab_ += jff * (kron_embed_pair(ops.sx, a, ops.sx, b, n, kSpin1Dim) +
                                kron_embed_pair(ops.sy, a, ops.sy, b, n, kSpin1Dim));
        // Excitation hopping |B0> <-> |0B>, |D0> <-> |0D>; the |BB><00|
        // family rotates at 2 omega and is dropped.
        const Operator hop = kron_embed_pair(b0, a, b0.adjoint(), b, n, kSpin1Dim) +
                             kron_embed_pair(d0, a, d0.adjoint(), b, n, kSpin1Dim);
        flipflop_rwa_ += jff * (hop + hop.adjoint());
      }
    }
  }
}

Operator ChainHamiltonian::nv_static() const {
  return spec_.d0 * sum_sz2_ + strain_ + flipflop_lab_ - ising_;
}

double ChainHamiltonian::rwa_detuning(double t) const {
  return (spec_.d0 - spec_.omega) + detuning(schedule_, t);
}

double ChainHamiltonian::lab_drive_coefficient(double t) const {
  return 2.0 * drive_amp(schedule_, t) * std::cos(drive_phase(schedule_, spec_.omega, t));
}

Operator ChainHamiltonian::lab(double t) const {
  return nv_static() + lab_drive_coefficient(t) * sum_sx_;
}

Operator ChainHamiltonian::rwa(double t) const {
  return rwa_detuning(t) * sum_sz2_ + drive_amp(schedule_, t) * sum_sx_ + strain_ +
         flipflop_rwa_ - ising_;
}

Operator ChainHamiltonian::at(double t, Frame frame) const {
  return frame == Frame::Lab ? lab(t) : rwa(t);
}

HamiltonianFn ChainHamiltonian::function(Frame frame) const {
  auto self = std::make_shared<const ChainHamiltonian>(*this);
  if (frame == Frame::Lab) {
    // The static part is loop-invariant in long lab-frame runs.
    auto fixed = std::make_shared<const Operator>(self->nv_static());
    return [self, fixed](double t) -> Operator {
      return *fixed + self->lab_drive_coefficient(t) * self->sum_sx_;
    };
  }
  return [self](double t) -> Operator { return self->rwa(t); };
}

Operator build_nv_static(const ChainSpec& spec) { return ChainHamiltonian(spec).nv_static(); }

Operator build_lab_frame(const ChainSpec& spec, double t) { return ChainHamiltonian(spec).lab(t); }

Operator build_rwa_frame(const ChainSpec& spec, double t) { return ChainHamiltonian(spec).rwa(t); }

std::vector<Operator> dephasing_jump_ops(int num_sites) {
  std::vector<Operator> ops;
  ops.reserve(num_sites);
  for (int s = 1; s <= num_sites; ++s) ops.push_back(kron_embed(spin1_ops().sz, s, num_sites, kSpin1Dim));
  return ops;
}

}  // namespace bqa
