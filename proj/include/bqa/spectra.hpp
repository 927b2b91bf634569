#pragma once

// Instantaneous spectra of the rotating-frame Hamiltonian along the anneal.
// Levels are tracked by sorted order.

#include <vector>

#include "bqa/hamiltonians.hpp"

namespace bqa {

struct SpectrumTrack {
  std::vector<double> times;
  Eigen::MatrixXd levels;  // n_times x n_levels, ascending per row (rad/s)

  Eigen::Index n_times() const { return levels.rows(); }
  Eigen::Index n_levels() const { return levels.cols(); }
};

struct Gap {
  double gap;   // rad/s
  double t_at;  // s
};

// Lowest n_levels eigenvalues of H_rwa(t) at n_times uniform times on [0, T].
SpectrumTrack track_spectrum(const ChainSpec& spec, int n_times, int n_levels);

// Same, with an arbitrary Hamiltonian function.
SpectrumTrack track_spectrum(const HamiltonianFn& hamiltonian, double t_total, int n_times,
                             int n_levels);

// min_t levels(t, upper) - levels(t, lower), first occurrence on ties.
Gap min_gap(const SpectrumTrack& track, int lower, int upper);

// Gap between levels `lower` and `upper` at the sample nearest to t.
double gap_at(const SpectrumTrack& track, double t, int lower, int upper);

struct ParityTracks {
  SpectrumTrack even;  // P = +1 sector, full sector spectrum
  SpectrumTrack odd;   // P = -1 sector
};

// Block-diagonalizes H_rwa(t) in the eigenspaces of the chain parity and
// diagonalizes each block.
ParityTracks parity_resolved_track(const ChainSpec& spec, int n_times);

// Orthonormal basis (columns) of the P = sign eigenspace.
Operator parity_sector_basis(int num_sites, int sign);

}  // namespace bqa
