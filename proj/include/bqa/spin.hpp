#pragma once

// Spin-1 and spin-1/2 operator sets, the bright/dark basis, the chain
// parity operator and the GHZ / product state constructors.

#include <span>
#include <vector>

#include "bqa/qop.hpp"

namespace bqa {

inline constexpr Eigen::Index kSpin1Dim = 3;
inline constexpr Eigen::Index kSpinHalfDim = 2;

struct Spin1Ops {
  Operator sx;   // |B><0| + |0><B|
  Operator sy;   // -i|D><0| + i|0><D|
  Operator sz;   // |+1><+1| - |-1><-1|
  Operator sz2;  // sz * sz
  StateVector bright;  // (|+1> + |-1>)/sqrt2
  StateVector dark;    // (|+1> - |-1>)/sqrt2
  StateVector zero;    // |0>

  // sx^2 - sy^2 = |B><B| - |D><D|
  Operator strain() const { return sx * sx - sy * sy; }
};

struct SpinHalfOps {
  Operator sigx;
  Operator sigz;
};

const Spin1Ops& spin1_ops();
const SpinHalfOps& spin_half_ops();

// Local index of magnetic quantum number m in {+1, 0, -1}.
Eigen::Index spin1_level_index(int m);

// Basis index of the product state with per-site labels m_j in {+1, 0, -1}.
Eigen::Index product_index(std::span<const int> labels);

// Per-site m values of basis index `index` in an L-site chain.
std::vector<int> product_labels(Eigen::Index index, int num_sites);

// Total Sz eigenvalue of each basis state, one row per site: m(site, index).
Eigen::MatrixXd site_sz_table(int num_sites);

StateVector product_state(std::span<const int> labels);
StateVector all_zero_state(int num_sites);

// (|1...1> + sign |-1...-1>)/sqrt2, real positive amplitude on |1...1>.
StateVector ghz_state(int num_sites, int sign);

// Tensor power of |B><B| - |D><D| + |0><0|, i.e. the per-site |+1> <-> |-1>
// swap.
Operator parity_op(int num_sites);

}  // namespace bqa
