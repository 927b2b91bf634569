#include "bqa/spin.hpp"

#include <cmath>
#include <string>

namespace bqa {

namespace {

StateVector basis3(Eigen::Index i) {
  StateVector v = StateVector::Zero(kSpin1Dim);
  v(i) = 1.0;
  return v;
}

Spin1Ops make_spin1() {
  Spin1Ops ops;
  const double r = 1.0 / std::sqrt(2.0);
  const StateVector up = basis3(0);
  const StateVector down = basis3(2);
  ops.zero = basis3(1);
  ops.bright = r * (up + down);
  ops.dark = r * (up - down);

  ops.sx = ops.bright * ops.zero.adjoint() + ops.zero * ops.bright.adjoint();
  ops.sy = -kI * (ops.dark * ops.zero.adjoint()) + kI * (ops.zero * ops.dark.adjoint());
  ops.sz = up * up.adjoint() - down * down.adjoint();
  ops.sz2 = ops.sz * ops.sz;
  return ops;
}

SpinHalfOps make_spin_half() {
  SpinHalfOps ops;
  ops.sigx = Operator::Zero(2, 2);
  ops.sigx(0, 1) = ops.sigx(1, 0) = 1.0;
  ops.sigz = Operator::Zero(2, 2);
  ops.sigz(0, 0) = 1.0;
  ops.sigz(1, 1) = -1.0;
  return ops;
}

}  // namespace

const Spin1Ops& spin1_ops() {
  static const Spin1Ops ops = make_spin1();
  return ops;
}

const SpinHalfOps& spin_half_ops() {
  static const SpinHalfOps ops = make_spin_half();
  return ops;
}

Eigen::Index spin1_level_index(int m) {
  switch (m) {
    case 1: return 0;
    case 0: return 1;
    case -1: return 2;
    default:
      throw InputError("spin-1 label must be one of +1, 0, -1 (got " + std::to_string(m) + ")");
  }
}

Eigen::Index product_index(std::span<const int> labels) {
  if (labels.empty()) throw InputError("product state needs at least one site");
  Eigen::Index idx = 0;
  for (int m : labels) idx = idx * kSpin1Dim + spin1_level_index(m);
  return idx;
}

std::vector<int> product_labels(Eigen::Index index, int num_sites) {
  std::vector<int> labels(num_sites);
  for (int s = num_sites - 1; s >= 0; --s) {
    labels[s] = 1 - static_cast<int>(index % kSpin1Dim);
    index /= kSpin1Dim;
  }
  return labels;
}

Eigen::MatrixXd site_sz_table(int num_sites) {
  const Eigen::Index dim = ipow(kSpin1Dim, num_sites);
  Eigen::MatrixXd table(num_sites, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto labels = product_labels(i, num_sites);
    for (int s = 0; s < num_sites; ++s) table(s, i) = labels[s];
  }
  return table;
}

StateVector product_state(std::span<const int> labels) {
  const Eigen::Index dim = ipow(kSpin1Dim, static_cast<int>(labels.size()));
  StateVector v = StateVector::Zero(dim);
  v(product_index(labels)) = 1.0;
  return v;
}

StateVector all_zero_state(int num_sites) {
  if (num_sites < 1) throw InputError("num_sites must be >= 1");
  const std::vector<int> labels(num_sites, 0);
  return product_state(labels);
}

StateVector ghz_state(int num_sites, int sign) {
  if (num_sites < 1) throw InputError("num_sites must be >= 1");
  if (sign != 1 && sign != -1) throw InputError("GHZ sign must be +1 or -1");
  const Eigen::Index dim = ipow(kSpin1Dim, num_sites);
  // |1...1> is index 0 and |-1...-1> is the last index in our ordering.
  StateVector v = StateVector::Zero(dim);
  const double r = 1.0 / std::sqrt(2.0);
  v(0) = r;
  v(dim - 1) = sign * r;
  return v;
}

Operator parity_op(int num_sites) {
  if (num_sites < 1) throw InputError("num_sites must be >= 1");
  // |B><B| - |D><D| + |0><0| equals the |+1> <-> |-1> swap; writing the
  // permutation directly keeps its entries exact, so parity checks on
  // Hamiltonians with entries ~1e9 rad/s are not limited by 1/sqrt2 round-off.
  Operator local = Operator::Zero(kSpin1Dim, kSpin1Dim);
  local(0, 2) = local(2, 0) = local(1, 1) = 1.0;
  Operator p = local;
  for (int s = 1; s < num_sites; ++s) p = kron(p, local);
  return p;
}

}  // namespace bqa
