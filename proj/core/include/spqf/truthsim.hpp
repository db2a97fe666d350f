#ifndef SPQF_TRUTHSIM_HPP
#define SPQF_TRUTHSIM_HPP

#include <cstdint>
#include <vector>

#include "spqf/filter.hpp"

namespace spqf {

struct SimulateOptions {
  /// Store the true-path conditional state at every grid point.
  bool keep_states = false;
  /// Store the drawn Wiener increments (the exact innovations).
  bool keep_innovations = false;
};

/// Synthetic homodyne record with its hidden truth. The record is
/// generated by a conditional filter driven by its own innovation: the
/// sampled (record, conditional state) pair then has the correct joint
/// law without ever materializing the field. The hidden filter knows the
/// sampled fault path; the filter under test sees only dY.
struct MeasurementRecord {
  double dt = 0.0;
  double t_end = 0.0;
  std::uint64_t seed = 0;

  std::vector<double> increments;  // dY per step
  FaultPath hidden_path;
  std::vector<ReferenceState> hidden_states;  // steps + 1 entries if kept
  std::vector<double> innovations;            // dW per step if kept
  std::vector<double> drifts;                 // K-bar per step if kept

  int steps() const { return static_cast<int>(increments.size()); }
};

/// Samples a fault path, then integrates the known-path conditional
/// filter, drawing dW ~ N(0, dt) and emitting dY = K-bar dt + dW.
MeasurementRecord simulate_record(const PlantModel& plant,
                                  const FaultModel& fault, const Wavepacket& w,
                                  double t_end, double dt, Rng& rng,
                                  const SimulateOptions& opts = {});

/// Deterministic (unconditional-mean) block trajectories: 4th-order
/// fixed-step solve of the drift-only coupled block ODEs, mode mixing
/// included. Snapshots are taken every `store_every` grid steps.
struct MasterTrajectory {
  double dt = 0.0;
  double t_end = 0.0;
  int store_every = 1;
  std::vector<double> times;
  std::vector<std::vector<FilterState::ModeBlocks>> snapshots;  // [time][mode]
};

MasterTrajectory master_solve(const PlantModel& plant, const FaultModel& fault,
                              const Wavepacket& w, double t_end, double dt,
                              int store_every = 1);

}  // namespace spqf

#endif
