#include "spqf/faultproc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spqf {

namespace {
int steps_for(double t_end, double dt, const char* who) {
  if (t_end <= 0.0 || dt <= 0.0) {
    throw ConfigError(std::string(who) + ": need t_end > 0 and dt > 0");
  }
  const double raw = t_end / dt;
  const auto steps = static_cast<int>(std::llround(raw));
  if (steps < 1 || std::abs(raw - steps) > 1e-9 * std::max(1.0, raw)) {
    std::ostringstream msg;
    msg << who << ": t_end/dt = " << raw << " is not an integer step count";
    throw ConfigError(msg.str());
  }
  return steps;
}
}  // namespace

FaultModel validate_qmatrix(const RealMatrix& rate_matrix,
                            const RealVector& initial_probs) {
  const Eigen::Index n = rate_matrix.rows();
  if (n < 1 || rate_matrix.cols() != n) {
    throw ConfigError("rate matrix must be square and nonempty");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    double col_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      col_sum += rate_matrix(j, k);
      if (j != k && rate_matrix(j, k) < 0.0) {
        std::ostringstream msg;
        msg << "rate matrix has negative off-diagonal at (" << j << ", " << k
            << "): " << rate_matrix(j, k);
        throw ConfigError(msg.str());
      }
    }
    if (std::abs(col_sum) > 1e-12) {
      std::ostringstream msg;
      msg << "rate matrix column " << k << " sums to " << col_sum
          << ", expected 0";
      throw ConfigError(msg.str());
    }
  }
  if (initial_probs.size() != n) {
    throw ConfigError("initial mode distribution size does not match matrix");
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (initial_probs(j) < 0.0) {
      throw ConfigError("initial mode distribution has a negative entry");
    }
    total += initial_probs(j);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "initial mode distribution sums to " << total << ", expected 1";
    throw ConfigError(msg.str());
  }
  return FaultModel{static_cast<int>(n), rate_matrix, initial_probs};
}

FaultModel single_fault_model(double rate) {
  if (rate <= 0.0) throw ConfigError("fault rate must be positive");
  RealMatrix pi(2, 2);
  pi << -rate, 0.0, rate, 0.0;
  RealVector p0(2);
  p0 << 1.0, 0.0;
  return validate_qmatrix(pi, p0);
}

int FaultPath::mode_at(double t) const {
  int mode = initial_mode;
  for (const Jump& j : jumps) {
    if (j.time > t) break;
    mode = j.to_mode;
  }
  return mode;
}

FaultPath sample_path(const FaultModel& model, double t_end, double dt,
                      Rng& rng) {
  const int steps = steps_for(t_end, dt, "sample_path");
  const int n = model.num_modes;

  FaultPath path;
  path.dt = dt;
  path.t_end = t_end;

  std::vector<double> weights(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) weights[j] = model.initial_probs(j);
  int mode = rng.categorical(weights);
  path.initial_mode = mode;

  double t = 0.0;
  while (true) {
    const double exit_rate = -model.rate_matrix(mode, mode);
    if (exit_rate <= 0.0) break;  // absorbing mode
    t += rng.exponential(exit_rate);
    if (t > t_end) break;
    for (int j = 0; j < n; ++j) {
      weights[j] = (j == mode) ? 0.0 : model.rate_matrix(j, mode);
    }
    mode = rng.categorical(weights);
    path.jumps.push_back({t, mode});
  }

  path.mode_grid.resize(static_cast<std::size_t>(steps) + 1);
  int current = path.initial_mode;
  std::size_t next_jump = 0;
  for (int i = 0; i <= steps; ++i) {
    const double ti = i * dt;
    while (next_jump < path.jumps.size() && path.jumps[next_jump].time <= ti) {
      current = path.jumps[next_jump].to_mode;
      ++next_jump;
    }
    path.mode_grid[static_cast<std::size_t>(i)] = current;
  }
  return path;
}

std::vector<RealVector> kolmogorov_solve(const FaultModel& model, double t_end,
                                         double dt) {
  const int steps = steps_for(t_end, dt, "kolmogorov_solve");
  std::vector<RealVector> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  RealVector p = model.initial_probs;
  out.push_back(p);
  const RealMatrix& pi = model.rate_matrix;
  for (int i = 0; i < steps; ++i) {
    const RealVector k1 = pi * p;
    const RealVector k2 = pi * (p + 0.5 * dt * k1);
    const RealVector k3 = pi * (p + 0.5 * dt * k2);
    const RealVector k4 = pi * (p + dt * k3);
    p += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(p);
  }
  return out;
}

}  // namespace spqf
