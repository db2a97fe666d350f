#ifndef SPQF_DETECT_HPP
#define SPQF_DETECT_HPP

#include <vector>

#include "spqf/faultproc.hpp"
#include "spqf/filter.hpp"
#include "spqf/types.hpp"

namespace spqf {

/// Conditional fault distribution p_hat_j = tr(b11_j) of a normalized
/// state.
RealVector posterior(const FilterState& state);

/// Threshold rule: every mode with p_hat_j >= threshold is flagged.
/// The result may be empty or contain several modes; resolving
/// multiplicities is left to the operator. threshold must lie in (0, 1].
std::vector<int> detect_modes(const RealVector& p_hat, double threshold);

/// Gain vector of the fault-detection equation,
/// G_j = sigma^j(L + L^dag) - p_hat_j * K_t: the realized posterior
/// increment is Pi p_hat dt + G dW up to discretization error.
RealVector detection_gain(const FaultTolerantFilter& filter,
                          const FilterState& state);

/// Per-trajectory detection record assembled while filtering.
struct DetectionReport {
  double dt = 0.0;
  std::vector<RealVector> posteriors;   // per grid point
  std::vector<std::vector<int>> flags;  // flagged modes per grid point
  std::vector<double> first_flag_time;  // per mode, NaN if never flagged
};

/// Builds a report from a posterior trajectory (posteriors[i] at t = i*dt).
DetectionReport build_report(const std::vector<RealVector>& posteriors,
                             double dt, double threshold);

struct CalibrationBin {
  double lo = 0.0, hi = 0.0;
  long count = 0;
  double mean_p = 0.0;  // mean posterior inside the bin
  double freq = 0.0;    // empirical frequency of the true mode
  double se = 0.0;      // clustered (per-trajectory) standard error of freq - mean_p
};

struct DetectionMetrics {
  int calibration_mode = 0;  // mode whose posterior is binned
  std::vector<CalibrationBin> calibration;
  std::vector<double> latencies;  // first flag after jump minus jump time, sorted
  long missed_jumps = 0;          // jumps whose mode was never flagged afterwards
  std::vector<std::vector<long>> confusion;  // [true][argmax] at the final sample
  long flagged_samples = 0;
  long flagged_agree = 0;  // flagged instants where the flagged mode was the true one
};

/// Streaming metrics over many trajectories. Trajectory boundaries matter:
/// the calibration standard error treats each trajectory as one cluster,
/// since samples along a record are strongly correlated.
class MetricsAccumulator {
 public:
  MetricsAccumulator(int num_modes, int calibration_mode, double threshold,
                     int num_bins = 10);

  void begin_trajectory(const FaultPath& truth);
  /// One grid sample of the posterior at time t.
  void add_sample(const RealVector& p_hat, double t);
  void end_trajectory();

  DetectionMetrics finalize() const;

 private:
  int num_modes_, calibration_mode_, num_bins_;
  double threshold_;
  long n_traj_ = 0;

  struct BinAccum {
    long count = 0;
    double sum_p = 0.0, sum_ind = 0.0;
    double traj_diff = 0.0;                  // current trajectory's sum of (ind - p)
    double sum_diff = 0.0, sum_diff2 = 0.0;  // across trajectories
  };
  std::vector<BinAccum> bins_;

  FaultPath truth_;
  std::vector<std::size_t> open_jumps_;  // indices awaiting their first flag
  RealVector last_posterior_;
  double last_t_ = 0.0;
  bool have_sample_ = false;
  bool in_trajectory_ = false;

  std::vector<double> latencies_;
  long missed_jumps_ = 0;
  std::vector<std::vector<long>> confusion_;
  long flagged_samples_ = 0, flagged_agree_ = 0;
};

/// Convenience wrapper over the accumulator for fully materialized runs.
DetectionMetrics compute_metrics(
    const std::vector<std::pair<DetectionReport, FaultPath>>& runs,
    int num_modes, int calibration_mode, double threshold);

}  // namespace spqf

#endif
