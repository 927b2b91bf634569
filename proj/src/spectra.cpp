#include "bqa/spectra.hpp"

#include <cmath>
#include <string>

#include "bqa/spin.hpp"

namespace bqa {

namespace {

std::vector<double> uniform_times(double t_total, int n_times) {
  if (n_times < 1) throw InputError("spectrum: n_times must be >= 1");
  if (n_times == 1) return {0.0};
  std::vector<double> times(n_times);
  for (int i = 0; i < n_times; ++i) times[i] = t_total * i / static_cast<double>(n_times - 1);
  return times;
}

SpectrumTrack track_with_basis(const HamiltonianFn& hamiltonian, const Operator* basis,
                               double t_total, int n_times, int n_levels) {
  SpectrumTrack track;
  track.times = uniform_times(t_total, n_times);
  track.levels.resize(n_times, n_levels);
  for (int i = 0; i < n_times; ++i) {
    Operator h = hamiltonian(track.times[i]);
    if (basis) h = basis->adjoint() * h * *basis;
    if (n_levels > h.rows()) {
      throw InputError("spectrum: n_levels " + std::to_string(n_levels) + " exceeds dimension " +
                       std::to_string(h.rows()));
    }
    const HermitianEigen e = eig_herm(h);
    track.levels.row(i) = e.values.head(n_levels).transpose();
  }
  return track;
}

}  // namespace

SpectrumTrack track_spectrum(const HamiltonianFn& hamiltonian, double t_total, int n_times,
                             int n_levels) {
  if (n_levels < 1) throw InputError("spectrum: n_levels must be >= 1");
  return track_with_basis(hamiltonian, nullptr, t_total, n_times, n_levels);
}

SpectrumTrack track_spectrum(const ChainSpec& spec, int n_times, int n_levels) {
  const ChainHamiltonian chain(spec);
  if (n_levels > spec.dim()) {
    throw InputError("spectrum: n_levels exceeds 3^L = " + std::to_string(spec.dim()));
  }
  return track_spectrum(chain.function(Frame::Rwa), spec.t_total, n_times, n_levels);
}

Gap min_gap(const SpectrumTrack& track, int lower, int upper) {
  if (track.n_times() == 0) throw InputError("min_gap: empty track");
  if (!(lower >= 0 && lower < upper && upper < track.n_levels())) {
    throw InputError("min_gap: need 0 <= lower < upper < n_levels");
  }
  Gap best{track.levels(0, upper) - track.levels(0, lower), track.times[0]};
  for (Eigen::Index i = 1; i < track.n_times(); ++i) {
    const double g = track.levels(i, upper) - track.levels(i, lower);
    if (g < best.gap) best = {g, track.times[i]};
  }
  return best;
}

double gap_at(const SpectrumTrack& track, double t, int lower, int upper) {
  if (track.n_times() == 0) throw InputError("gap_at: empty track");
  if (!(lower >= 0 && lower < upper && upper < track.n_levels())) {
    throw InputError("gap_at: need 0 <= lower < upper < n_levels");
  }
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < track.n_times(); ++i) {
    if (std::abs(track.times[i] - t) < std::abs(track.times[best] - t)) best = i;
  }
  return track.levels(best, upper) - track.levels(best, lower);
}

Operator parity_sector_basis(int num_sites, int sign) {
  if (sign != 1 && sign != -1) throw InputError("parity sector sign must be +1 or -1");
  const Operator p = parity_op(num_sites);
  const HermitianEigen e = eig_herm(p);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (std::abs(e.values(i) - sign) < 1e-8) cols.push_back(i);
  }
  // The projector (I + sign P)/2 must have the same rank.
  const Operator proj = 0.5 * (identity(p.rows()) + static_cast<double>(sign) * p);
  const double rank = proj.trace().real();
  if (std::abs(rank - static_cast<double>(cols.size())) > 1e-8) {
    throw NumericalError("parity sector: projector rank mismatch");
  }
  Operator basis(p.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) basis.col(c) = e.vectors.col(cols[c]);
  return basis;
}

ParityTracks parity_resolved_track(const ChainSpec& spec, int n_times) {
  const ChainHamiltonian chain(spec);
  const HamiltonianFn h = chain.function(Frame::Rwa);
  const Operator even = parity_sector_basis(spec.num_sites, +1);
  const Operator odd = parity_sector_basis(spec.num_sites, -1);
  for (double t : uniform_times(spec.t_total, n_times)) {
    const Operator ht = h(t);
    if (max_abs(odd.adjoint() * ht * even) > 1e-10 * std::max(1.0, max_abs(ht))) {
      throw NumericalError("parity_resolved_track: Hamiltonian mixes parity sectors");
    }
  }
  return {track_with_basis(h, &even, spec.t_total, n_times, static_cast<int>(even.cols())),
          track_with_basis(h, &odd, spec.t_total, n_times, static_cast<int>(odd.cols()))};
}

}  // namespace bqa
