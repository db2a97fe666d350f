#ifndef SPQF_EXPERIMENT_HPP
#define SPQF_EXPERIMENT_HPP

#include <functional>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "spqf/config.hpp"
#include "spqf/detect.hpp"
#include "spqf/truthsim.hpp"

namespace spqf {

/// Runs fn(0..n-1) on `workers` threads. Work items must be independent;
/// the first exception thrown is rethrown on the calling thread after all
/// workers finish.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

/// Ensemble aggregates of a simulate run. All statistics are folded in
/// trajectory-index order, so they are identical for any worker count.
struct EnsembleSummary {
  int trajectories = 0;
  std::uint64_t seed = 0;
  std::string hash;

  std::vector<double> checkpoint_times;
  RealMatrix p_model;     // checkpoints x modes, forward Kolmogorov solution
  RealMatrix p_hat_mean;  // ensemble mean of the posterior
  RealMatrix p_hat_se;    // standard error of that mean
  double max_z = 0.0;     // max |mean - model| / se over checkpoints and modes

  RealVector b00_trace_mean;  // ensemble mean of sum_j tr(b00_j) at checkpoints
  RealVector b00_trace_se;

  DetectionMetrics detection;

  long innovation_count = 0;
  double innovation_mean = 0.0;
  double innovation_var = 0.0;
  double innovation_lag1 = 0.0;  // lag-1 autocorrelation estimate

  long clamped_steps = 0;
  long total_steps = 0;
};

/// Simulate + filter + detect over run.trajectories records, each on RNG
/// substream(seed, trajectory index). When out_dir is nonempty, writes
/// per-trajectory record/trajectory/flags CSVs (and fault-path CSVs when
/// hidden truth is kept) plus summary.json. Identical (config, seed) give
/// byte-identical outputs for any worker count.
EnsembleSummary run_simulate(const ExperimentConfig& config,
                             const std::string& out_dir = {});

/// Offline filtering of a stored record. Optionally streams the
/// trajectory and flags CSVs; returns the detection report.
DetectionReport run_filter_offline(const ExperimentConfig& config,
                                   const MeasurementRecord& record,
                                   std::ostream* trajectory_csv = nullptr,
                                   std::ostream* flags_csv = nullptr);

nlohmann::json summary_to_json(const EnsembleSummary& summary);

}  // namespace spqf

#endif
