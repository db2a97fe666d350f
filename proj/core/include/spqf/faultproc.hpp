#ifndef SPQF_FAULTPROC_HPP
#define SPQF_FAULTPROC_HPP

#include <vector>

#include "spqf/rng.hpp"
#include "spqf/types.hpp"

namespace spqf {

/// Continuous-time Markov chain over fault modes 0..N-1.
///
/// Convention: rate_matrix(j, k) with j != k is the rate of transitions
/// k -> j; every column sums to zero, so the mode distribution obeys
/// dp/dt = Pi p.
struct FaultModel {
  int num_modes = 0;
  RealMatrix rate_matrix;  // Pi
  RealVector initial_probs;  // p0
};

/// Validates Pi (off-diagonals >= 0, columns sum to zero within 1e-12)
/// and p0 (nonnegative, sums to 1 within 1e-12).
FaultModel validate_qmatrix(const RealMatrix& rate_matrix,
                            const RealVector& initial_probs);

/// Two-mode model with a single absorbing fault: the system leaves mode 0
/// at rate `rate` and never returns. Pi = [[-rate, 0], [rate, 0]],
/// p0 = [1, 0].
FaultModel single_fault_model(double rate);

/// One sampled realization of the fault process: right-continuous
/// piecewise-constant mode index, discretized to a uniform grid, plus the
/// exact jump instants.
struct FaultPath {
  double dt = 0.0;
  double t_end = 0.0;
  int initial_mode = 0;
  std::vector<int> mode_grid;  // size steps + 1, mode at t = i*dt
  struct Jump {
    double time;
    int to_mode;
  };
  std::vector<Jump> jumps;

  /// Mode at an arbitrary time (right-continuous).
  int mode_at(double t) const;
};

/// Exact-jump-time (competing exponentials) sampling of the chain, then
/// discretization to the output grid. Exit rate of mode k is
/// -rate_matrix(k, k); the next mode j is drawn with probability
/// rate_matrix(j, k) / exit rate.
FaultPath sample_path(const FaultModel& model, double t_end, double dt,
                      Rng& rng);

/// Fixed-step 4th-order solve of dp/dt = Pi p on the grid; returns p at
/// every grid point (steps + 1 vectors).
std::vector<RealVector> kolmogorov_solve(const FaultModel& model, double t_end,
                                         double dt);

}  // namespace spqf

#endif
