#pragma once

// Dense complex linear algebra over many-body Hilbert spaces.
//
// Basis convention used everywhere in this library: each spin-1 site is
// ordered {|+1>, |0>, |-1>} (spin-1/2 sites {|0>, |1>} = {up, down}), and
// sites appear left to right in tensor order, so site 1 is the most
// significant digit of a basis index.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bqa {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// Invalid input: wrong dimension, out-of-range index, malformed config.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical invariant (hermiticity, trace, positivity, norm) was violated
// beyond tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double hermitian = 1e-12;      // ||A - A^dag||_max relative to max(1, ||A||_max)
  double eig_residual = 1e-8;    // relative to ||A||_max
  double fidelity_imag = 1e-8;   // largest tolerated imaginary residue of <phi|rho|phi>
  double state_norm = 1e-9;
  double dm_hermitian = 1e-10;
  double dm_trace = 1e-8;
  double dm_min_eig = -1e-8;
};

const Tolerances& default_tolerances();

// Mixed state. Holds any square matrix; physicality is checked on demand.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Operator entries);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  Eigen::Index dim() const { return entries_.rows(); }
  const Operator& entries() const { return entries_; }
  Operator& entries() { return entries_; }

  double trace_error() const;        // |Tr rho - 1|
  double hermiticity_error() const;  // ||rho - rho^dag||_max
  double min_eigenvalue() const;
  double purity() const;             // Tr rho^2

  // Throws NumericalError naming the violated invariant.
  void check_physical(const Tolerances& tol = default_tolerances()) const;

 private:
  Operator entries_;
};

struct HermitianEigen {
  RealVector values;     // ascending
  Operator vectors;      // column k pairs with values[k], orthonormal
};

double max_abs(const Operator& a);
double hermiticity_error(const Operator& a);
bool is_hermitian(const Operator& a, double tol = default_tolerances().hermitian);
void require_hermitian(const Operator& a, const char* what,
                       double tol = default_tolerances().hermitian);

Operator identity(Eigen::Index dim);
Eigen::Index ipow(Eigen::Index base, int exp);

// Kronecker product a (x) b.
Operator kron(const Operator& a, const Operator& b);

// I (x) ... (x) local_op (x) ... (x) I with local_op at 1-based `site`.
Operator kron_embed(const Operator& local_op, int site, int num_sites,
                    Eigen::Index local_dim);

// Product of two single-site operators placed at distinct 1-based sites.
Operator kron_embed_pair(const Operator& op_a, int site_a, const Operator& op_b,
                         int site_b, int num_sites, Eigen::Index local_dim);

HermitianEigen eig_herm(const Operator& a);

// exp(-i H dt), computed from the Hermitian eigendecomposition.
Operator unitary_propagator(const Operator& h, double dt);

// exp(-i H dt) psi.
StateVector expm_mul(const Operator& h, double dt, const StateVector& psi);

// <phi|rho|phi>.
double fidelity_pure(const DensityMatrix& rho, const StateVector& phi);
double fidelity_pure(const StateVector& psi, const StateVector& phi);

// max-abs entry of AB - BA.
double commutator_norm(const Operator& a, const Operator& b);

double expectation(const Operator& a, const StateVector& psi);
double expectation(const Operator& a, const DensityMatrix& rho);

}  // namespace bqa
