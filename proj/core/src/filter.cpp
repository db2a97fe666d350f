#include "spqf/filter.hpp"

#include <cmath>
#include <sstream>

#include "spqf/linop.hpp"

namespace spqf {

namespace {

const Complex kI{0.0, 1.0};

void require_step_args(double dY, double dt) {
  if (!(dt > 0.0)) throw ConfigError("filter step: dt must be positive");
  if (!std::isfinite(dY)) {
    throw ConfigError("filter step: non-finite observation increment");
  }
}

void require_finite_mass(double m, double t) {
  if (!std::isfinite(m) || m < 1e-12) {
    std::ostringstream msg;
    msg << "filter diverged at t = " << t << ": total trace " << m;
    throw DivergenceError(msg.str());
  }
}

}  // namespace

double FilterState::mass() const {
  double m = 0.0;
  for (const ModeBlocks& mb : modes) m += mb.b11.trace().real();
  return m;
}

FaultTolerantFilter::FaultTolerantFilter(PlantModel plant, FaultModel fault,
                                         Wavepacket w, FilterConfig config)
    : plant_(std::move(plant)),
      fault_(std::move(fault)),
      wave_(std::move(w)),
      config_(config) {
  validate_plant(plant_);
  if (plant_.num_modes() != fault_.num_modes) {
    std::ostringstream msg;
    msg << "plant has " << plant_.num_modes() << " mode Hamiltonians but the "
        << "fault model has " << fault_.num_modes << " modes";
    throw ConfigError(msg.str());
  }
  coupling_dag_ = plant_.coupling.adjoint();
  coupling_sq_ = coupling_dag_ * plant_.coupling;
  coupling_re2_ = plant_.coupling + coupling_dag_;
  scratch_.resize(static_cast<std::size_t>(fault_.num_modes));
}

FilterState FaultTolerantFilter::init_state() const {
  // At t = 0 the ancilla is excited and omega(0) = 1, so the 00 and 11
  // functionals both reduce to p0_j * tr(pi0 X) and the coherences vanish.
  FilterState s;
  s.form = config_.form;
  s.modes.resize(static_cast<std::size_t>(fault_.num_modes));
  const Operator zero = Operator::Zero(plant_.dim, plant_.dim);
  for (int j = 0; j < fault_.num_modes; ++j) {
    auto& mb = s.modes[static_cast<std::size_t>(j)];
    mb.b00 = fault_.initial_probs(j) * plant_.initial_state;
    mb.b10 = zero;
    mb.b11 = mb.b00;
  }
  return s;
}

Complex FaultTolerantFilter::effective_xi(double t, bool& clamped) const {
  clamped = wave_.decoupled(t);
  return clamped ? Complex{0.0, 0.0} : wave_.xi(t);
}

void FaultTolerantFilter::compute_derivs(const FilterState& state, Complex xi,
                                         std::vector<Derivs>& out) const {
  const int n_modes = state.num_modes();
  const Operator& L = plant_.coupling;
  const Complex xic = std::conj(xi);

  for (int j = 0; j < n_modes; ++j) {
    const auto& mb = state.modes[static_cast<std::size_t>(j)];
    const Operator& H = plant_.hamiltonians[static_cast<std::size_t>(j)];
    const Operator b01 = mb.b10.adjoint();
    Derivs& d = out[static_cast<std::size_t>(j)];

    // Mode-wise Lindblad dissipator, density side.
    auto dissipate = [&](const Operator& P) -> Operator {
      return -kI * (H * P - P * H) + L * P * coupling_dag_ -
             0.5 * (coupling_sq_ * P + P * coupling_sq_);
    };

    d.a00 = dissipate(mb.b00);
    d.a10 = dissipate(mb.b10) + xic * (L * mb.b00 - mb.b00 * L);
    d.a11 = dissipate(mb.b11) + xic * (L * b01 - b01 * L) +
            xi * (mb.b10 * coupling_dag_ - coupling_dag_ * mb.b10);

    // Classical mode mixing sum_k a_jk * block_k.
    for (int k = 0; k < n_modes; ++k) {
      const double rate = fault_.rate_matrix(j, k);
      if (rate == 0.0) continue;
      const auto& src = state.modes[static_cast<std::size_t>(k)];
      d.a00 += rate * src.b00;
      d.a10 += rate * src.b10;
      d.a11 += rate * src.b11;
    }

    d.d00 = L * mb.b00 + mb.b00 * coupling_dag_;
    d.d10 = L * mb.b10 + mb.b10 * coupling_dag_ + xic * mb.b00;
    d.d11 = L * mb.b11 + mb.b11 * coupling_dag_ + xic * b01 + xi * mb.b10;
  }
}

double FaultTolerantFilter::raw_innovation_drift(const FilterState& state,
                                                 Complex xi) const {
  Complex k{0.0, 0.0};
  for (const auto& mb : state.modes) {
    k += (mb.b11 * coupling_re2_).trace();
    // xi tr(b10) + conj(xi) tr(b01) with b01 = b10^dag is exactly real.
    k += 2.0 * (xi * mb.b10.trace()).real();
  }
  const double scale = std::max(1.0, std::abs(state.mass()));
  if (std::abs(k.imag()) > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "innovation drift developed an imaginary part " << k.imag()
        << " at t = " << state.t;
    throw DivergenceError(msg.str());
  }
  return k.real();
}

StepResult FaultTolerantFilter::step(FilterState& state, double dY, double dt) {
  return state.form == FilterForm::Normalized ? step_normalized(state, dY, dt)
                                              : step_zakai(state, dY, dt);
}

StepResult FaultTolerantFilter::step_normalized(FilterState& state, double dY,
                                                double dt) {
  require_step_args(dY, dt);
  if (state.form != FilterForm::Normalized) {
    throw ConfigError("step_normalized called on a Zakai-form state");
  }

  bool clamped = false;
  const Complex xi = effective_xi(state.t, clamped);
  const double k_drift = raw_innovation_drift(state, xi);
  const double dW = dY - k_drift * dt;

  compute_derivs(state, xi, scratch_);
  for (int j = 0; j < state.num_modes(); ++j) {
    auto& mb = state.modes[static_cast<std::size_t>(j)];
    const Derivs& d = scratch_[static_cast<std::size_t>(j)];
    mb.b00 += dt * d.a00 + dW * (d.d00 - k_drift * mb.b00);
    mb.b10 += dt * d.a10 + dW * (d.d10 - k_drift * mb.b10);
    mb.b11 += dt * d.a11 + dW * (d.d11 - k_drift * mb.b11);
  }

  state.t += dt;
  ++state.steps_taken;
  if (clamped) ++state.clamped_steps;
  apply_projections(state);
  return {k_drift, dW, clamped};
}

StepResult FaultTolerantFilter::step_zakai(FilterState& state, double dY,
                                           double dt) {
  require_step_args(dY, dt);
  if (state.form != FilterForm::Zakai) {
    throw ConfigError("step_zakai called on a normalized-form state");
  }

  bool clamped = false;
  const Complex xi = effective_xi(state.t, clamped);
  const double mass_before = state.mass();
  require_finite_mass(mass_before, state.t);
  const double k_drift = raw_innovation_drift(state, xi) / mass_before;
  const double dW = dY - k_drift * dt;

  compute_derivs(state, xi, scratch_);
  for (int j = 0; j < state.num_modes(); ++j) {
    auto& mb = state.modes[static_cast<std::size_t>(j)];
    const Derivs& d = scratch_[static_cast<std::size_t>(j)];
    mb.b00 += dt * d.a00 + dY * d.d00;
    mb.b10 += dt * d.a10 + dY * d.d10;
    mb.b11 += dt * d.a11 + dY * d.d11;
  }

  state.t += dt;
  ++state.steps_taken;
  if (clamped) ++state.clamped_steps;
  apply_projections(state);
  return {k_drift, dW, clamped};
}

void FaultTolerantFilter::apply_projections(FilterState& state) {
  if (config_.resym_interval > 0 &&
      state.steps_taken % config_.resym_interval == 0) {
    for (auto& mb : state.modes) {
      mb.b00 = hermitize(mb.b00);
      mb.b11 = hermitize(mb.b11);
    }
  }

  const bool renormalize =
      state.form == FilterForm::Normalized
          ? config_.project_each_step
          : (config_.renorm_interval > 0 &&
             state.steps_taken % config_.renorm_interval == 0);
  if (!renormalize) return;

  const double m = state.mass();
  require_finite_mass(m, state.t);
  const double inv = 1.0 / m;
  for (auto& mb : state.modes) {
    mb.b00 *= inv;
    mb.b10 *= inv;
    mb.b11 *= inv;
  }
  if (state.form == FilterForm::Zakai) state.log_normalizer += std::log(m);
}

void FaultTolerantFilter::normalize(FilterState& state) {
  const double m = state.mass();
  if (!std::isfinite(m) || m <= 0.0) {
    std::ostringstream msg;
    msg << "cannot normalize state with total trace " << m;
    throw DivergenceError(msg.str());
  }
  const double inv = 1.0 / m;
  for (auto& mb : state.modes) {
    mb.b00 *= inv;
    mb.b10 *= inv;
    mb.b11 *= inv;
  }
  if (state.form == FilterForm::Zakai) {
    state.log_normalizer += std::log(m);
    state.form = FilterForm::Normalized;
  }
}

BlockEstimates FaultTolerantFilter::estimate(const FilterState& state,
                                             const Operator& X) const {
  if (X.rows() != plant_.dim || X.cols() != plant_.dim) {
    throw ConfigError("estimate: observable dimension does not match plant");
  }
  double scale = 1.0;
  if (state.form == FilterForm::Zakai) {
    const double m = state.mass();
    require_finite_mass(m, state.t);
    scale = 1.0 / m;
  }

  BlockEstimates est;
  for (auto& v : est.per_mode) v.resize(static_cast<std::size_t>(state.num_modes()));
  est.aggregate.fill({0.0, 0.0});
  for (int j = 0; j < state.num_modes(); ++j) {
    const auto& mb = state.modes[static_cast<std::size_t>(j)];
    const std::size_t ji = static_cast<std::size_t>(j);
    est.per_mode[kBlock00][ji] = scale * (mb.b00 * X).trace();
    est.per_mode[kBlock10][ji] = scale * (mb.b10 * X).trace();
    est.per_mode[kBlock01][ji] = scale * (mb.b10.adjoint() * X).trace();
    est.per_mode[kBlock11][ji] = scale * (mb.b11 * X).trace();
    for (int ab = 0; ab < 4; ++ab) {
      est.aggregate[static_cast<std::size_t>(ab)] +=
          est.per_mode[static_cast<std::size_t>(ab)][ji];
    }
  }
  return est;
}

double FaultTolerantFilter::innovation_drift(const FilterState& state) const {
  bool clamped = false;
  const Complex xi = effective_xi(state.t, clamped);
  const double m = state.mass();
  require_finite_mass(m, state.t);
  return raw_innovation_drift(state, xi) / m;
}

std::vector<double> FaultTolerantFilter::innovation_drift_components(
    const FilterState& state) const {
  bool clamped = false;
  const Complex xi = effective_xi(state.t, clamped);
  const double m = state.mass();
  require_finite_mass(m, state.t);
  std::vector<double> out(static_cast<std::size_t>(state.num_modes()));
  for (int j = 0; j < state.num_modes(); ++j) {
    const auto& mb = state.modes[static_cast<std::size_t>(j)];
    Complex c = (mb.b11 * coupling_re2_).trace();
    c += 2.0 * (xi * mb.b10.trace()).real();
    out[static_cast<std::size_t>(j)] = c.real() / m;
  }
  return out;
}

// --- Reference (no-fault) single-photon filter -----------------------------
//
// Transcribed directly from the mode-free reduction of the filter SDE.
// Kept free of any code shared with FaultTolerantFilter::compute_derivs so
// the two implementations can serve as cross-checks of one another.

ReferenceFilter::ReferenceFilter(Operator coupling, Wavepacket w)
    : coupling_(std::move(coupling)), wave_(std::move(w)) {
  if (coupling_.rows() != coupling_.cols() || coupling_.rows() < 1) {
    throw ConfigError("reference filter coupling must be square");
  }
  coupling_dag_ = coupling_.adjoint();
  coupling_sq_ = coupling_dag_ * coupling_;
  coupling_re2_ = coupling_ + coupling_dag_;
}

ReferenceState ReferenceFilter::init(const DensityMatrix& initial_state) const {
  validate_density(initial_state);
  if (initial_state.rows() != coupling_.rows()) {
    throw ConfigError("reference filter initial state dimension mismatch");
  }
  ReferenceState s;
  s.b00 = initial_state;
  s.b10 = Operator::Zero(initial_state.rows(), initial_state.cols());
  s.b11 = initial_state;
  return s;
}

double ReferenceFilter::innovation_drift(const ReferenceState& state) const {
  const Complex xi =
      wave_.decoupled(state.t) ? Complex{0.0, 0.0} : wave_.xi(state.t);
  const Complex k = (state.b11 * coupling_re2_).trace() +
                    xi * state.b10.trace() +
                    std::conj(xi * state.b10.trace());
  return k.real();
}

StepResult ReferenceFilter::step(ReferenceState& state,
                                 const Operator& hamiltonian, double dY,
                                 double dt) const {
  require_step_args(dY, dt);

  const bool clamped = wave_.decoupled(state.t);
  const Complex xi = clamped ? Complex{0.0, 0.0} : wave_.xi(state.t);
  const Complex xic = std::conj(xi);
  const Operator b01 = state.b10.adjoint();

  const Complex k_raw = (state.b11 * coupling_re2_).trace() +
                        xi * state.b10.trace() + xic * b01.trace();
  const double scale = std::max(1.0, std::abs(state.b11.trace().real()));
  if (std::abs(k_raw.imag()) > 1e-10 * scale) {
    throw DivergenceError("reference filter innovation drift not real");
  }
  const double k_drift = k_raw.real();
  const double dW = dY - k_drift * dt;

  const Operator& L = coupling_;
  const Operator& H = hamiltonian;

  const Operator gen00 = -kI * commutator(H, state.b00) +
                         L * state.b00 * coupling_dag_ -
                         0.5 * (coupling_sq_ * state.b00 + state.b00 * coupling_sq_);
  const Operator gen10 = -kI * commutator(H, state.b10) +
                         L * state.b10 * coupling_dag_ -
                         0.5 * (coupling_sq_ * state.b10 + state.b10 * coupling_sq_);
  const Operator gen11 = -kI * commutator(H, state.b11) +
                         L * state.b11 * coupling_dag_ -
                         0.5 * (coupling_sq_ * state.b11 + state.b11 * coupling_sq_);

  const Operator drift00 = gen00;
  const Operator drift10 = gen10 + xic * commutator(L, state.b00);
  const Operator drift11 = gen11 + xic * commutator(L, b01) +
                           xi * commutator(state.b10, coupling_dag_);

  const Operator diff00 =
      L * state.b00 + state.b00 * coupling_dag_ - k_drift * state.b00;
  const Operator diff10 = L * state.b10 + state.b10 * coupling_dag_ +
                          xic * state.b00 - k_drift * state.b10;
  const Operator diff11 = L * state.b11 + state.b11 * coupling_dag_ +
                          xic * b01 + xi * state.b10 - k_drift * state.b11;

  state.b00 += dt * drift00 + dW * diff00;
  state.b10 += dt * drift10 + dW * diff10;
  state.b11 += dt * drift11 + dW * diff11;

  state.t += dt;
  if (clamped) ++state.clamped_steps;

  state.b00 = hermitize(state.b00);
  state.b11 = hermitize(state.b11);
  const double m = state.b11.trace().real();
  require_finite_mass(m, state.t);
  const double inv = 1.0 / m;
  state.b00 *= inv;
  state.b10 *= inv;
  state.b11 *= inv;

  return {k_drift, dW, clamped};
}

}  // namespace spqf
