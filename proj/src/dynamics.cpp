#include "bqa/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "bqa/spin.hpp"

namespace bqa {

const char* to_string(Integrator i) {
  switch (i) {
    case Integrator::Midpoint: return "midpoint";
    case Integrator::Magnus4: return "magnus4";
    case Integrator::AdaptiveRk: return "adaptive-rk";
  }
  return "?";
}

Integrator integrator_from_string(const std::string& s) {
  if (s == "midpoint" || s == "stepwise-exponential") return Integrator::Midpoint;
  if (s == "magnus4") return Integrator::Magnus4;
  if (s == "adaptive-rk") return Integrator::AdaptiveRk;
  throw InputError("unknown integrator '" + s + "'");
}

void EvolveOptions::validate(double t_total) const {
  if (!(t_total > 0.0)) throw InputError("evolve: t_total must be > 0");
  if (n_steps < 1) throw InputError("evolve: n_steps must be >= 1");
  if (n_out < 1) throw InputError("evolve: n_out must be >= 1");
  if (integrator != Integrator::AdaptiveRk && step(t_total) > max_step * (1.0 + 1e-12)) {
    throw InputError("evolve: step " + std::to_string(step(t_total)) +
                     " s exceeds the admissible maximum " + std::to_string(max_step) +
                     " s; increase n_steps");
  }
}

double lab_frame_max_step(double omega) {
  if (!(omega > 0.0)) return std::numeric_limits<double>::infinity();
  return (2.0 * std::numbers::pi / omega) / 20.0;
}

Targets Targets::for_chain(int num_sites) {
  Targets t;
  t.num_sites = num_sites;
  t.ghz_plus = ghz_state(num_sites, +1);
  t.ghz_minus = ghz_state(num_sites, -1);
  t.all_zero = all_zero_state(num_sites);
  t.parity = parity_op(num_sites);
  return t;
}

void Trajectory::push(const Sample& s) {
  times.push_back(s.t);
  fidelity_plus.push_back(s.fidelity_plus);
  fidelity_minus.push_back(s.fidelity_minus);
  parity_expect.push_back(s.parity_expect);
  purity.push_back(s.purity);
  pop_all_zero.push_back(s.pop_all_zero);
  pop_ghz_manifold.push_back(s.pop_ghz_manifold);
  norm_error.push_back(s.norm_error);
  hermiticity_error.push_back(s.hermiticity_error);
  min_eigenvalue.push_back(s.min_eigenvalue);
  parity_asymmetry.push_back(s.parity_asymmetry);
}

double Trajectory::final_fidelity() const {
  if (fidelity_plus.empty()) throw InputError("trajectory is empty");
  return fidelity_plus.back();
}

namespace {

void check_targets(const Targets& targets, Eigen::Index dim) {
  if (targets.ghz_plus.size() != dim) {
    throw InputError("record_observables: targets built for a different chain length");
  }
}

}  // namespace

Sample record_observables(const StateVector& psi, const Targets& targets, double t) {
  check_targets(targets, psi.size());
  Sample s;
  s.t = t;
  const double n2 = psi.squaredNorm();
  s.fidelity_plus = fidelity_pure(psi, targets.ghz_plus);
  s.fidelity_minus = fidelity_pure(psi, targets.ghz_minus);
  const StateVector ppsi = targets.parity * psi;
  s.parity_expect = psi.dot(ppsi).real();
  s.purity = n2 * n2;
  s.pop_all_zero = std::norm(targets.all_zero.dot(psi));
  s.pop_ghz_manifold = std::norm(psi(0)) + std::norm(psi(psi.size() - 1));
  s.norm_error = std::abs(std::sqrt(n2) - 1.0);
  s.hermiticity_error = 0.0;
  s.min_eigenvalue = 0.0;
  s.parity_asymmetry = max_abs(ppsi * ppsi.adjoint() - psi * psi.adjoint());
  return s;
}

Sample record_observables(const DensityMatrix& rho, const Targets& targets, double t) {
  check_targets(targets, rho.dim());
  const Operator& r = rho.entries();
  Sample s;
  s.t = t;
  s.fidelity_plus = fidelity_pure(rho, targets.ghz_plus);
  s.fidelity_minus = fidelity_pure(rho, targets.ghz_minus);
  s.parity_expect = expectation(targets.parity, rho);
  s.purity = rho.purity();
  const Eigen::Index zero = product_index(std::vector<int>(targets.num_sites, 0));
  s.pop_all_zero = r(zero, zero).real();
  s.pop_ghz_manifold = r(0, 0).real() + r(r.rows() - 1, r.rows() - 1).real();
  s.norm_error = rho.trace_error();
  s.hermiticity_error = rho.hermiticity_error();
  s.min_eigenvalue = rho.min_eigenvalue();
  s.parity_asymmetry = max_abs(targets.parity * r * targets.parity - r);
  return s;
}

namespace {

// Step indices at which samples are taken: round(i * n_steps / (n_out - 1)).
std::vector<int> sample_steps(int n_steps, int n_out) {
  std::vector<int> steps;
  if (n_out == 1) return {n_steps};
  steps.reserve(n_out);
  for (int i = 0; i < n_out; ++i) {
    steps.push_back(static_cast<int>(
        std::llround(static_cast<double>(i) * n_steps / static_cast<double>(n_out - 1))));
  }
  return steps;
}

std::vector<double> sample_times(double t_total, int n_out) {
  if (n_out == 1) return {t_total};
  std::vector<double> times(n_out);
  for (int i = 0; i < n_out; ++i) times[i] = t_total * i / static_cast<double>(n_out - 1);
  return times;
}

Operator checked_h(const HamiltonianFn& hamiltonian, double t, Eigen::Index dim) {
  Operator h = hamiltonian(t);
  if (h.rows() != dim || h.cols() != dim) {
    throw InputError("evolve: Hamiltonian dimension does not match the state");
  }
  require_hermitian(h, "evolve");
  return h;
}

// Fourth-order commutator-free Magnus (Blanes & Moan): two exponentials of
// weighted Gauss-point Hamiltonians.
struct Magnus4Weights {
  static constexpr double c1 = 0.5 - 0.28867513459481288225;  // 1/2 - sqrt3/6
  static constexpr double c2 = 0.5 + 0.28867513459481288225;
  static constexpr double a1 = (3.0 - 2.0 * 1.7320508075688772935) / 12.0;
  static constexpr double a2 = (3.0 + 2.0 * 1.7320508075688772935) / 12.0;
};

// Unitary for [t, t + dt] under the fixed-step integrators.
Operator step_unitary(const HamiltonianFn& hamiltonian, Integrator integrator, double t,
                      double dt, Eigen::Index dim) {
  if (integrator == Integrator::Magnus4) {
    using W = Magnus4Weights;
    const Operator h1 = checked_h(hamiltonian, t + W::c1 * dt, dim);
    const Operator h2 = checked_h(hamiltonian, t + W::c2 * dt, dim);
    const Operator first = unitary_propagator(W::a2 * h1 + W::a1 * h2, dt);
    const Operator second = unitary_propagator(W::a1 * h1 + W::a2 * h2, dt);
    return second * first;
  }
  return unitary_propagator(checked_h(hamiltonian, t + 0.5 * dt, dim), dt);
}

StateVector step_state(const HamiltonianFn& hamiltonian, Integrator integrator, double t,
                       double dt, const StateVector& psi) {
  const Eigen::Index dim = psi.size();
  if (integrator == Integrator::Midpoint) {
    return expm_mul(checked_h(hamiltonian, t + 0.5 * dt, dim), dt, psi);
  }
  using W = Magnus4Weights;
  const Operator h1 = checked_h(hamiltonian, t + W::c1 * dt, dim);
  const Operator h2 = checked_h(hamiltonian, t + W::c2 * dt, dim);
  const StateVector mid = expm_mul(W::a2 * h1 + W::a1 * h2, dt, psi);
  return expm_mul(W::a1 * h1 + W::a2 * h2, dt, mid);
}

// GKSL dissipator sum_j (gamma/2)(2 L rho L^dag - L^dag L rho - rho L^dag L).
class Dissipator {
 public:
  Dissipator(std::span<const Operator> jumps, double gamma, Eigen::Index dim)
      : gamma_(gamma), dim_(dim) {
    if (gamma < 0.0) throw InputError("evolve_lindblad: gamma must be >= 0");
    diagonal_ = true;
    ldl_ = Operator::Zero(dim, dim);
    for (const Operator& l : jumps) {
      if (l.rows() != dim || l.cols() != dim) {
        throw InputError("evolve_lindblad: jump operator dimension mismatch");
      }
      jumps_.push_back(l);
      ldl_ += l.adjoint() * l;
      const Operator off = l - Operator(l.diagonal().asDiagonal());
      if (max_abs(off) != 0.0) diagonal_ = false;
    }
    if (diagonal_) {
      // rho_ab -> rho_ab * exp(tau * rate_ab)
      rates_ = Operator::Zero(dim, dim);
      for (const Operator& l : jumps_) {
        const Eigen::VectorXcd d = l.diagonal();
        for (Eigen::Index a = 0; a < dim; ++a) {
          for (Eigen::Index b = 0; b < dim; ++b) {
            rates_(a, b) += 0.5 * gamma_ *
                            (2.0 * d(a) * std::conj(d(b)) - std::norm(d(a)) - std::norm(d(b)));
          }
        }
      }
    }
  }

  bool active() const { return gamma_ > 0.0 && !jumps_.empty(); }

  Operator apply(const Operator& rho) const {
    Operator out = -0.5 * gamma_ * (ldl_ * rho + rho * ldl_);
    for (const Operator& l : jumps_) out += gamma_ * (l * rho * l.adjoint());
    return out;
  }

  // Exact map exp(tau D) as a reusable step.
  class Map {
   public:
    Operator operator()(const Operator& rho) const {
      if (diagonal_) return rho.cwiseProduct(factors_);
      Eigen::Map<const Eigen::VectorXcd> v(rho.data(), rho.size());
      Eigen::VectorXcd out = super_ * v;
      return Eigen::Map<Operator>(out.data(), rho.rows(), rho.cols());
    }

   private:
    friend class Dissipator;
    bool diagonal_ = true;
    Operator factors_;
    Operator super_;
  };

  Map exact_map(double tau) const {
    Map m;
    m.diagonal_ = diagonal_;
    if (diagonal_) {
      m.factors_ = (tau * rates_).array().exp().matrix();
      return m;
    }
    // Column-major vec: vec(A X B) = (B^T (x) A) vec(X).
    const Operator id = identity(dim_);
    Operator s = -0.5 * gamma_ * (kron(id, ldl_) + kron(ldl_.transpose(), id));
    for (const Operator& l : jumps_) s += gamma_ * kron(l.conjugate(), l);
    m.super_ = (tau * s).exp();
    return m;
  }

 private:
  double gamma_;
  Eigen::Index dim_;
  bool diagonal_ = true;
  std::vector<Operator> jumps_;
  Operator ldl_;
  Operator rates_;
};

// Dormand-Prince 5(4) with FSAL; Y is an Eigen dense type.
template <typename Y, typename Rhs>
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, double rtol, double atol, double max_step)
      : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol), max_step_(max_step) {}

  void advance(Y& y, double t0, double t1) {
    double t = t0;
    if (h_ <= 0.0) h_ = std::min(max_step_, (t1 - t0) / 100.0);
    bool have_k1 = false;
    Y k1;
    while (t < t1) {
      double h = std::min({h_, max_step_, t1 - t});
      if (!have_k1) {
        k1 = rhs_(t, y);
        have_k1 = true;
      }
      const Y k2 = rhs_(t + h / 5.0, (y + h * (k1 / 5.0)).eval());
      const Y k3 = rhs_(t + 3.0 * h / 10.0, (y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2)).eval());
      const Y k4 = rhs_(t + 4.0 * h / 5.0,
                        (y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3)).eval());
      const Y k5 = rhs_(t + 8.0 * h / 9.0,
                        (y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                                  64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4))
                            .eval());
      const Y k6 = rhs_(t + h, (y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                                         46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                                         5103.0 / 18656.0 * k5))
                                   .eval());
      const Y y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 -
                            2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
      const Y k7 = rhs_(t + h, y5);
      const Y err = h * ((35.0 / 384.0 - 5179.0 / 57600.0) * k1 +
                         (500.0 / 1113.0 - 7571.0 / 16695.0) * k3 +
                         (125.0 / 192.0 - 393.0 / 640.0) * k4 +
                         (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5 +
                         (11.0 / 84.0 - 187.0 / 2100.0) * k6 - (1.0 / 40.0) * k7);
      const double scale = atol_ + rtol_ * std::max(y.cwiseAbs().maxCoeff(), y5.cwiseAbs().maxCoeff());
      const double e = err.cwiseAbs().maxCoeff() / scale;
      if (e <= 1.0) {
        t += h;
        y = y5;
        k1 = k7;
      }
      const double factor = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
      h_ = h * factor;
      if (h_ < 1e-14 * (t1 - t0 + std::abs(t0))) {
        throw NumericalError("adaptive-rk: step size underflow");
      }
    }
  }

 private:
  Rhs rhs_;
  double rtol_;
  double atol_;
  double max_step_;
  double h_ = 0.0;
};

void check_mixed_sample(const Sample& s, const EvolveOptions& opts) {
  if (!opts.enforce_physicality) return;
  if (s.norm_error > opts.trace_tol) {
    throw NumericalError("evolve_lindblad: trace drift " + std::to_string(s.norm_error) +
                         " at t = " + std::to_string(s.t));
  }
  if (s.hermiticity_error > opts.hermitian_tol) {
    throw NumericalError("evolve_lindblad: hermiticity defect " +
                         std::to_string(s.hermiticity_error) + " at t = " + std::to_string(s.t));
  }
  if (s.min_eigenvalue < opts.min_eig_tol) {
    throw NumericalError("evolve_lindblad: negative eigenvalue " +
                         std::to_string(s.min_eigenvalue) +
                         " (step size too large?) at t = " + std::to_string(s.t));
  }
}

void check_pure_sample(const StateVector& psi, double t, const EvolveOptions& opts) {
  if (!opts.enforce_physicality) return;
  const double err = std::abs(psi.norm() - 1.0);
  if (err > 1e-8) {
    throw NumericalError("evolve_schrodinger: norm drift " + std::to_string(err) + " at t = " +
                         std::to_string(t));
  }
}

Sample time_only(double t) {
  Sample s;
  s.t = t;
  return s;
}

}  // namespace

PureEvolution evolve_schrodinger(const HamiltonianFn& hamiltonian, const StateVector& psi0,
                                 double t_total, const EvolveOptions& opts,
                                 const Targets* targets) {
  opts.validate(t_total);
  if (std::abs(psi0.norm() - 1.0) > default_tolerances().state_norm) {
    throw InputError("evolve_schrodinger: initial state is not normalized");
  }
  PureEvolution out;
  StateVector psi = psi0;
  auto record = [&](double t) {
    check_pure_sample(psi, t, opts);
    out.trajectory.push(targets ? record_observables(psi, *targets, t) : time_only(t));
  };

  if (opts.integrator == Integrator::AdaptiveRk) {
    const Eigen::Index dim = psi.size();
    auto rhs = [&](double t, const StateVector& y) -> StateVector {
      return -kI * (checked_h(hamiltonian, t, dim) * y);
    };
    DormandPrince<StateVector, decltype(rhs)> rk(rhs, opts.rk_rel_tol, opts.rk_abs_tol,
                                                 opts.max_step);
    const auto times = sample_times(t_total, opts.n_out);
    double t = 0.0;
    for (double ts : times) {
      if (ts > t) rk.advance(psi, t, ts);
      t = ts;
      record(ts);
    }
    out.final_state = psi;
    return out;
  }

  const double dt = opts.step(t_total);
  const auto steps = sample_steps(opts.n_steps, opts.n_out);
  std::size_t next = 0;
  while (next < steps.size() && steps[next] == 0) {
    record(0.0);
    ++next;
  }
  for (int k = 0; k < opts.n_steps; ++k) {
    psi = step_state(hamiltonian, opts.integrator, k * dt, dt, psi);
    while (next < steps.size() && steps[next] == k + 1) {
      record((k + 1) * dt);
      ++next;
    }
  }
  out.final_state = psi;
  return out;
}

MixedEvolution evolve_lindblad(const HamiltonianFn& hamiltonian, const DensityMatrix& rho0,
                               std::span<const Operator> jump_ops, double gamma,
                               double t_total, const EvolveOptions& opts,
                               const Targets* targets) {
  opts.validate(t_total);
  rho0.check_physical();
  const Eigen::Index dim = rho0.dim();
  const Dissipator dissipator(jump_ops, gamma, dim);

  MixedEvolution out;
  Operator rho = rho0.entries();
  auto record = [&](double t) {
    const DensityMatrix dm(rho);
    Sample s = targets ? record_observables(dm, *targets, t) : time_only(t);
    if (!targets) {
      s.norm_error = dm.trace_error();
      s.hermiticity_error = dm.hermiticity_error();
      s.min_eigenvalue = dm.min_eigenvalue();
    }
    check_mixed_sample(s, opts);
    out.trajectory.push(s);
  };

  if (opts.integrator == Integrator::AdaptiveRk) {
    auto rhs = [&](double t, const Operator& r) -> Operator {
      const Operator h = checked_h(hamiltonian, t, dim);
      Operator d = -kI * (h * r - r * h);
      if (dissipator.active()) d += dissipator.apply(r);
      return d;
    };
    DormandPrince<Operator, decltype(rhs)> rk(rhs, opts.rk_rel_tol, opts.rk_abs_tol,
                                              opts.max_step);
    const auto times = sample_times(t_total, opts.n_out);
    double t = 0.0;
    for (double ts : times) {
      if (ts > t) rk.advance(rho, t, ts);
      t = ts;
      record(ts);
    }
    out.final_state = DensityMatrix(rho);
    return out;
  }

  // Strang splitting: half dissipator, unitary step, half dissipator.
  const double dt = opts.step(t_total);
  const bool dissipate = dissipator.active();
  const Dissipator::Map half = dissipator.exact_map(0.5 * dt);
  const auto steps = sample_steps(opts.n_steps, opts.n_out);
  std::size_t next = 0;
  while (next < steps.size() && steps[next] == 0) {
    record(0.0);
    ++next;
  }
  for (int k = 0; k < opts.n_steps; ++k) {
    if (dissipate) rho = half(rho);
    const Operator u = step_unitary(hamiltonian, opts.integrator, k * dt, dt, dim);
    rho = u * rho * u.adjoint();
    if (dissipate) rho = half(rho);
    while (next < steps.size() && steps[next] == k + 1) {
      record((k + 1) * dt);
      ++next;
    }
  }
  out.final_state = DensityMatrix(rho);
  return out;
}

namespace {

// exp(-i H dt) psi by Taylor series with scaling and squaring on the
// operator, truncated once a term drops below 1e-16 relative.
Operator taylor_propagator(const Operator& h, double dt) {
  const Operator a = (-kI * dt) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.5) {
    scaled *= 0.5;
    ++squarings;
  }
  const Operator as = a / std::ldexp(1.0, squarings);
  Operator sum = identity(h.rows());
  Operator term = identity(h.rows());
  for (int k = 1; k < 40; ++k) {
    term = (term * as) / static_cast<double>(k);
    sum += term;
    if (max_abs(term) < 1e-16 * max_abs(sum)) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace

StateVector oracle_propagate(const HamiltonianFn& hamiltonian, const StateVector& psi0,
                             double t_total, int n_fine) {
  if (n_fine < 1) throw InputError("oracle_propagate: n_fine must be >= 1");
  const double dt = t_total / n_fine;
  StateVector psi = psi0;
  for (int k = 0; k < n_fine; ++k) {
    const Operator h = hamiltonian((k + 0.5) * dt);
    if (h.rows() != psi.size()) throw InputError("oracle_propagate: dimension mismatch");
    psi = taylor_propagator(h, dt) * psi;
  }
  return psi;
}

StateVector instantaneous_ground_state(const Operator& h, const Operator& parity,
                                       int sector_sign) {
  if (h.rows() != parity.rows()) throw InputError("instantaneous_ground_state: dimension mismatch");
  const HermitianEigen pe = eig_herm(parity);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < pe.values.size(); ++i) {
    if (std::abs(pe.values(i) - sector_sign) < 1e-8) cols.push_back(i);
  }
  if (cols.empty()) throw NumericalError("instantaneous_ground_state: empty parity sector");
  Operator basis(h.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) basis.col(c) = pe.vectors.col(cols[c]);
  const HermitianEigen e = eig_herm(basis.adjoint() * h * basis);
  StateVector g = basis * e.vectors.col(0);
  // Fix the global phase: largest component real positive.
  Eigen::Index imax = 0;
  g.cwiseAbs().maxCoeff(&imax);
  g *= std::conj(g(imax)) / std::abs(g(imax));
  return g.normalized();
}

}  // namespace bqa
