#include "spqf/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace spqf {

RealVector posterior(const FilterState& state) {
  RealVector p(state.num_modes());
  double mass = 0.0;
  for (int j = 0; j < state.num_modes(); ++j) {
    p(j) = state.modes[static_cast<std::size_t>(j)].b11.trace().real();
    mass += p(j);
  }
  if (state.form == FilterForm::Zakai) {
    if (!std::isfinite(mass) || mass <= 0.0) {
      throw DivergenceError("posterior of a collapsed Zakai state");
    }
    p /= mass;
  }
  return p;
}

std::vector<int> detect_modes(const RealVector& p_hat, double threshold) {
  if (!(threshold > 0.0) || threshold > 1.0) {
    std::ostringstream msg;
    msg << "detection threshold " << threshold << " outside (0, 1]";
    throw ConfigError(msg.str());
  }
  std::vector<int> flagged;
  for (Eigen::Index j = 0; j < p_hat.size(); ++j) {
    if (p_hat(j) >= threshold) flagged.push_back(static_cast<int>(j));
  }
  return flagged;
}

RealVector detection_gain(const FaultTolerantFilter& filter,
                          const FilterState& state) {
  const std::vector<double> components =
      filter.innovation_drift_components(state);
  const RealVector p_hat = posterior(state);
  double total = 0.0;
  for (double c : components) total += c;
  RealVector g(state.num_modes());
  for (int j = 0; j < state.num_modes(); ++j) {
    g(j) = components[static_cast<std::size_t>(j)] - p_hat(j) * total;
  }
  return g;
}

DetectionReport build_report(const std::vector<RealVector>& posteriors,
                             double dt, double threshold) {
  if (posteriors.empty()) throw ConfigError("empty posterior trajectory");
  const auto num_modes = static_cast<std::size_t>(posteriors.front().size());

  DetectionReport rep;
  rep.dt = dt;
  rep.posteriors = posteriors;
  rep.flags.reserve(posteriors.size());
  rep.first_flag_time.assign(num_modes,
                             std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    const double t = static_cast<double>(i) * dt;
    std::vector<int> f = detect_modes(posteriors[i], threshold);
    for (int j : f) {
      auto& first = rep.first_flag_time[static_cast<std::size_t>(j)];
      if (std::isnan(first)) first = t;
    }
    rep.flags.push_back(std::move(f));
  }
  return rep;
}

MetricsAccumulator::MetricsAccumulator(int num_modes, int calibration_mode,
                                       double threshold, int num_bins)
    : num_modes_(num_modes),
      calibration_mode_(calibration_mode),
      num_bins_(num_bins),
      threshold_(threshold) {
  if (calibration_mode < 0 || calibration_mode >= num_modes) {
    throw ConfigError("calibration mode index out of range");
  }
  if (!(threshold > 0.0) || threshold > 1.0) {
    throw ConfigError("detection threshold outside (0, 1]");
  }
  bins_.resize(static_cast<std::size_t>(num_bins));
  confusion_.assign(static_cast<std::size_t>(num_modes),
                    std::vector<long>(static_cast<std::size_t>(num_modes), 0));
}

void MetricsAccumulator::begin_trajectory(const FaultPath& truth) {
  truth_ = truth;
  open_jumps_.clear();
  for (std::size_t i = 0; i < truth_.jumps.size(); ++i) open_jumps_.push_back(i);
  for (auto& b : bins_) b.traj_diff = 0.0;
  have_sample_ = false;
  in_trajectory_ = true;
}

void MetricsAccumulator::add_sample(const RealVector& p_hat, double t) {
  if (!in_trajectory_) throw ConfigError("add_sample outside a trajectory");
  const int true_mode = truth_.mode_at(t);

  const double p = p_hat(calibration_mode_);
  int bin = static_cast<int>(p * num_bins_);
  bin = std::clamp(bin, 0, num_bins_ - 1);
  auto& b = bins_[static_cast<std::size_t>(bin)];
  const double indicator = (true_mode == calibration_mode_) ? 1.0 : 0.0;
  ++b.count;
  b.sum_p += p;
  b.sum_ind += indicator;
  b.traj_diff += indicator - p;

  for (int j = 0; j < num_modes_; ++j) {
    if (p_hat(j) >= threshold_) {
      ++flagged_samples_;
      if (true_mode == j) ++flagged_agree_;
    }
  }

  // Close any jump whose target mode is flagged at or after the jump time.
  for (auto it = open_jumps_.begin(); it != open_jumps_.end();) {
    const FaultPath::Jump& jump = truth_.jumps[*it];
    if (t >= jump.time && p_hat(jump.to_mode) >= threshold_) {
      latencies_.push_back(t - jump.time);
      it = open_jumps_.erase(it);
    } else {
      ++it;
    }
  }

  last_posterior_ = p_hat;
  last_t_ = t;
  have_sample_ = true;
}

void MetricsAccumulator::end_trajectory() {
  if (!in_trajectory_) return;
  ++n_traj_;
  for (auto& b : bins_) {
    b.sum_diff += b.traj_diff;
    b.sum_diff2 += b.traj_diff * b.traj_diff;
  }
  missed_jumps_ += static_cast<long>(open_jumps_.size());
  if (have_sample_) {
    Eigen::Index argmax = 0;
    last_posterior_.maxCoeff(&argmax);
    const int true_mode = truth_.mode_at(last_t_);
    ++confusion_[static_cast<std::size_t>(true_mode)]
                [static_cast<std::size_t>(argmax)];
  }
  in_trajectory_ = false;
}

DetectionMetrics MetricsAccumulator::finalize() const {
  DetectionMetrics m;
  m.calibration_mode = calibration_mode_;
  m.calibration.reserve(bins_.size());
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const BinAccum& b = bins_[i];
    CalibrationBin out;
    out.lo = static_cast<double>(i) / num_bins_;
    out.hi = static_cast<double>(i + 1) / num_bins_;
    out.count = b.count;
    if (b.count > 0) {
      out.mean_p = b.sum_p / static_cast<double>(b.count);
      out.freq = b.sum_ind / static_cast<double>(b.count);
    }
    if (n_traj_ > 1 && b.count > 0) {
      const double mean_d = b.sum_diff / static_cast<double>(n_traj_);
      const double var_d =
          (b.sum_diff2 - static_cast<double>(n_traj_) * mean_d * mean_d) /
          static_cast<double>(n_traj_ - 1);
      out.se = std::sqrt(std::max(0.0, var_d) * static_cast<double>(n_traj_)) /
               static_cast<double>(b.count);
    }
    m.calibration.push_back(out);
  }
  m.latencies = latencies_;
  std::sort(m.latencies.begin(), m.latencies.end());
  m.missed_jumps = missed_jumps_;
  m.confusion = confusion_;
  m.flagged_samples = flagged_samples_;
  m.flagged_agree = flagged_agree_;
  return m;
}

DetectionMetrics compute_metrics(
    const std::vector<std::pair<DetectionReport, FaultPath>>& runs,
    int num_modes, int calibration_mode, double threshold) {
  MetricsAccumulator acc(num_modes, calibration_mode, threshold);
  for (const auto& [report, truth] : runs) {
    acc.begin_trajectory(truth);
    for (std::size_t i = 0; i < report.posteriors.size(); ++i) {
      acc.add_sample(report.posteriors[i], static_cast<double>(i) * report.dt);
    }
    acc.end_trajectory();
  }
  return acc.finalize();
}

}  // namespace spqf
