#include "spqf/truthsim.hpp"

#include <cmath>
#include <sstream>

#include "spqf/linop.hpp"

namespace spqf {

namespace {

const Complex kI{0.0, 1.0};

int checked_steps(double t_end, double dt) {
  if (t_end <= 0.0 || dt <= 0.0) {
    throw ConfigError("simulation horizon and step must be positive");
  }
  const double raw = t_end / dt;
  const auto steps = static_cast<int>(std::llround(raw));
  if (steps < 1 || std::abs(raw - steps) > 1e-9 * std::max(1.0, raw)) {
    std::ostringstream msg;
    msg << "t_end/dt = " << raw << " is not an integer step count";
    throw ConfigError(msg.str());
  }
  return steps;
}

using Blocks = std::vector<FilterState::ModeBlocks>;

// Drift-only right-hand side of the coupled block equations, written out
// for the deterministic solver.
void drift_rhs(const PlantModel& plant, const FaultModel& fault,
               const Wavepacket& w, double t, const Blocks& y, Blocks& dydt) {
  const Complex xi = w.xi_effective(t);
  const Complex xic = std::conj(xi);
  const Operator& L = plant.coupling;
  const Operator Ld = L.adjoint();
  const Operator LdL = Ld * L;
  const int n_modes = fault.num_modes;

  for (int j = 0; j < n_modes; ++j) {
    const auto& mb = y[static_cast<std::size_t>(j)];
    const Operator& H = plant.hamiltonians[static_cast<std::size_t>(j)];
    const Operator b01 = mb.b10.adjoint();
    auto dissipate = [&](const Operator& P) -> Operator {
      return -kI * (H * P - P * H) + L * P * Ld - 0.5 * (LdL * P + P * LdL);
    };
    auto& d = dydt[static_cast<std::size_t>(j)];
    d.b00 = dissipate(mb.b00);
    d.b10 = dissipate(mb.b10) + xic * (L * mb.b00 - mb.b00 * L);
    d.b11 = dissipate(mb.b11) + xic * (L * b01 - b01 * L) +
            xi * (mb.b10 * Ld - Ld * mb.b10);
    for (int k = 0; k < n_modes; ++k) {
      const double rate = fault.rate_matrix(j, k);
      if (rate == 0.0) continue;
      const auto& src = y[static_cast<std::size_t>(k)];
      d.b00 += rate * src.b00;
      d.b10 += rate * src.b10;
      d.b11 += rate * src.b11;
    }
  }
}

Blocks axpy(const Blocks& y, double a, const Blocks& x) {
  Blocks out = y;
  for (std::size_t j = 0; j < y.size(); ++j) {
    out[j].b00 += a * x[j].b00;
    out[j].b10 += a * x[j].b10;
    out[j].b11 += a * x[j].b11;
  }
  return out;
}

}  // namespace

MeasurementRecord simulate_record(const PlantModel& plant,
                                  const FaultModel& fault, const Wavepacket& w,
                                  double t_end, double dt, Rng& rng,
                                  const SimulateOptions& opts) {
  validate_plant(plant);
  if (plant.num_modes() != fault.num_modes) {
    throw ConfigError("plant and fault model disagree on the mode count");
  }
  const int steps = checked_steps(t_end, dt);

  MeasurementRecord rec;
  rec.dt = dt;
  rec.t_end = t_end;
  rec.hidden_path = sample_path(fault, t_end, dt, rng);
  rec.increments.resize(static_cast<std::size_t>(steps));
  if (opts.keep_innovations) {
    rec.innovations.resize(static_cast<std::size_t>(steps));
    rec.drifts.resize(static_cast<std::size_t>(steps));
  }

  const ReferenceFilter ref(plant.coupling, w);
  ReferenceState state = ref.init(plant.initial_state);
  if (opts.keep_states) {
    rec.hidden_states.reserve(static_cast<std::size_t>(steps) + 1);
    rec.hidden_states.push_back(state);
  }

  for (int i = 0; i < steps; ++i) {
    const int mode = rec.hidden_path.mode_grid[static_cast<std::size_t>(i)];
    const Operator& h_true = plant.hamiltonians[static_cast<std::size_t>(mode)];
    const double k_drift = ref.innovation_drift(state);
    const double dW = rng.wiener_increment(dt);
    const double dY = k_drift * dt + dW;
    rec.increments[static_cast<std::size_t>(i)] = dY;
    if (opts.keep_innovations) {
      rec.innovations[static_cast<std::size_t>(i)] = dW;
      rec.drifts[static_cast<std::size_t>(i)] = k_drift;
    }
    ref.step(state, h_true, dY, dt);
    if (opts.keep_states) rec.hidden_states.push_back(state);
  }
  return rec;
}

MasterTrajectory master_solve(const PlantModel& plant, const FaultModel& fault,
                              const Wavepacket& w, double t_end, double dt,
                              int store_every) {
  validate_plant(plant);
  if (plant.num_modes() != fault.num_modes) {
    throw ConfigError("plant and fault model disagree on the mode count");
  }
  if (store_every < 1) throw ConfigError("store_every must be >= 1");
  const int steps = checked_steps(t_end, dt);

  Blocks y(static_cast<std::size_t>(fault.num_modes));
  const Operator zero = Operator::Zero(plant.dim, plant.dim);
  for (int j = 0; j < fault.num_modes; ++j) {
    auto& mb = y[static_cast<std::size_t>(j)];
    mb.b00 = fault.initial_probs(j) * plant.initial_state;
    mb.b10 = zero;
    mb.b11 = mb.b00;
  }

  MasterTrajectory out;
  out.dt = dt;
  out.t_end = t_end;
  out.store_every = store_every;
  out.times.push_back(0.0);
  out.snapshots.push_back(y);

  Blocks k1 = y, k2 = y, k3 = y, k4 = y;
  for (int i = 0; i < steps; ++i) {
    const double t = i * dt;
    drift_rhs(plant, fault, w, t, y, k1);
    drift_rhs(plant, fault, w, t + 0.5 * dt, axpy(y, 0.5 * dt, k1), k2);
    drift_rhs(plant, fault, w, t + 0.5 * dt, axpy(y, 0.5 * dt, k2), k3);
    drift_rhs(plant, fault, w, t + dt, axpy(y, dt, k3), k4);
    for (std::size_t j = 0; j < y.size(); ++j) {
      y[j].b00 += dt / 6.0 * (k1[j].b00 + 2.0 * k2[j].b00 + 2.0 * k3[j].b00 + k4[j].b00);
      y[j].b10 += dt / 6.0 * (k1[j].b10 + 2.0 * k2[j].b10 + 2.0 * k3[j].b10 + k4[j].b10);
      y[j].b11 += dt / 6.0 * (k1[j].b11 + 2.0 * k2[j].b11 + 2.0 * k3[j].b11 + k4[j].b11);
    }
    if ((i + 1) % store_every == 0 || i + 1 == steps) {
      out.times.push_back((i + 1) * dt);
      out.snapshots.push_back(y);
    }
  }
  return out;
}

}  // namespace spqf
