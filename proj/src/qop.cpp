#include "bqa/qop.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace bqa {

const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

DensityMatrix::DensityMatrix(Operator entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw InputError("density matrix must be square and non-empty");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

double DensityMatrix::trace_error() const {
  return std::abs(entries_.trace() - cplx{1.0, 0.0});
}

double DensityMatrix::hermiticity_error() const {
  return bqa::hermiticity_error(entries_);
}

double DensityMatrix::min_eigenvalue() const {
  // Eigenvalues of the Hermitian part; the anti-Hermitian residue is
  // reported separately by hermiticity_error().
  const Operator herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum_ij rho_ij rho_ji
  return (entries_.cwiseProduct(entries_.transpose())).sum().real();
}

void DensityMatrix::check_physical(const Tolerances& tol) const {
  if (hermiticity_error() > tol.dm_hermitian) {
    throw NumericalError("density matrix not Hermitian: defect " +
                         std::to_string(hermiticity_error()));
  }
  if (trace_error() > tol.dm_trace) {
    throw NumericalError("density matrix trace drifted: |Tr rho - 1| = " +
                         std::to_string(trace_error()));
  }
  if (const double m = min_eigenvalue(); m < tol.dm_min_eig) {
    throw NumericalError("density matrix not positive: min eigenvalue " +
                         std::to_string(m));
  }
}

double max_abs(const Operator& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermiticity_error(const Operator& a) {
  return max_abs(a - a.adjoint());
}

bool is_hermitian(const Operator& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return hermiticity_error(a) <= tol * std::max(1.0, max_abs(a));
}

void require_hermitian(const Operator& a, const char* what, double tol) {
  if (a.rows() != a.cols()) {
    throw InputError(std::string(what) + ": operator is not square");
  }
  if (!is_hermitian(a, tol)) {
    throw NumericalError(std::string(what) + ": operator is not Hermitian (defect " +
                         std::to_string(hermiticity_error(a)) + ")");
  }
}

Operator identity(Eigen::Index dim) { return Operator::Identity(dim, dim); }

Eigen::Index ipow(Eigen::Index base, int exp) {
  Eigen::Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

void check_local(const Operator& op, Eigen::Index local_dim, const char* what) {
  if (local_dim < 1) throw InputError(std::string(what) + ": local_dim must be >= 1");
  if (op.rows() != local_dim || op.cols() != local_dim) {
    throw InputError(std::string(what) + ": local operator is " +
                     std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
                     ", expected " + std::to_string(local_dim) + "x" +
                     std::to_string(local_dim));
  }
}

void check_site(int site, int num_sites, const char* what) {
  if (num_sites < 1 || site < 1 || site > num_sites) {
    throw InputError(std::string(what) + ": site " + std::to_string(site) +
                     " out of range 1.." + std::to_string(num_sites));
  }
}

}  // namespace

Operator kron_embed(const Operator& local_op, int site, int num_sites,
                    Eigen::Index local_dim) {
  check_local(local_op, local_dim, "kron_embed");
  check_site(site, num_sites, "kron_embed");
  const Eigen::Index left = ipow(local_dim, site - 1);
  const Eigen::Index right = ipow(local_dim, num_sites - site);
  return kron(kron(identity(left), local_op), identity(right));
}

Operator kron_embed_pair(const Operator& op_a, int site_a, const Operator& op_b,
                         int site_b, int num_sites, Eigen::Index local_dim) {
  check_local(op_a, local_dim, "kron_embed_pair");
  check_local(op_b, local_dim, "kron_embed_pair");
  check_site(site_a, num_sites, "kron_embed_pair");
  check_site(site_b, num_sites, "kron_embed_pair");
  if (site_a == site_b) throw InputError("kron_embed_pair: sites must differ");
  Operator out = Operator::Identity(1, 1);
  for (int s = 1; s <= num_sites; ++s) {
    if (s == site_a) {
      out = kron(out, op_a);
    } else if (s == site_b) {
      out = kron(out, op_b);
    } else {
      out = kron(out, identity(local_dim));
    }
  }
  return out;
}

HermitianEigen eig_herm(const Operator& a) {
  require_hermitian(a, "eig_herm");
  // Eigen reads only the lower triangle; feeding the symmetrized matrix keeps
  // the residual bound relative to the input.
  const Operator herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(herm);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eig_herm: eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

Operator unitary_propagator(const Operator& h, double dt) {
  const HermitianEigen e = eig_herm(h);
  const Eigen::VectorXcd phases =
      (e.values.cast<cplx>() * cplx{0.0, -dt}).array().exp().matrix();
  return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

StateVector expm_mul(const Operator& h, double dt, const StateVector& psi) {
  if (h.rows() != psi.size()) {
    throw InputError("expm_mul: operator dim " + std::to_string(h.rows()) +
                     " does not match state dim " + std::to_string(psi.size()));
  }
  const HermitianEigen e = eig_herm(h);
  const Eigen::VectorXcd phases =
      (e.values.cast<cplx>() * cplx{0.0, -dt}).array().exp().matrix();
  return e.vectors * (phases.asDiagonal() * (e.vectors.adjoint() * psi));
}

namespace {

double clamp_fidelity(cplx f, double imag_tol) {
  if (std::abs(f.imag()) > imag_tol) {
    throw NumericalError("fidelity has imaginary residue " + std::to_string(f.imag()) +
                         "; density matrix is corrupted");
  }
  return std::clamp(f.real(), 0.0, 1.0);
}

}  // namespace

double fidelity_pure(const DensityMatrix& rho, const StateVector& phi) {
  if (rho.dim() != phi.size()) {
    throw InputError("fidelity_pure: dimension mismatch");
  }
  const cplx f = phi.dot(rho.entries() * phi);
  return clamp_fidelity(f, default_tolerances().fidelity_imag);
}

double fidelity_pure(const StateVector& psi, const StateVector& phi) {
  if (psi.size() != phi.size()) {
    throw InputError("fidelity_pure: dimension mismatch");
  }
  return std::min(1.0, std::norm(phi.dot(psi)));
}

double commutator_norm(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw InputError("commutator_norm: dimension mismatch");
  }
  return max_abs(a * b - b * a);
}

double expectation(const Operator& a, const StateVector& psi) {
  if (a.rows() != psi.size()) throw InputError("expectation: dimension mismatch");
  return psi.dot(a * psi).real();
}

double expectation(const Operator& a, const DensityMatrix& rho) {
  if (a.rows() != rho.dim()) throw InputError("expectation: dimension mismatch");
  return (a * rho.entries()).trace().real();
}

}  // namespace bqa
