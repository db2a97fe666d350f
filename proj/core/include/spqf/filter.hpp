#ifndef SPQF_FILTER_HPP
#define SPQF_FILTER_HPP

#include <array>
#include <vector>

#include "spqf/cascade.hpp"
#include "spqf/faultproc.hpp"
#include "spqf/types.hpp"
#include "spqf/wavepacket.hpp"

namespace spqf {

enum class FilterForm { Normalized, Zakai };

struct FilterConfig {
  FilterForm form = FilterForm::Normalized;
  /// Steps between explicit renormalizations of the linear (Zakai) form;
  /// the scale factor is folded into the running log-normalizer.
  int renorm_interval = 100;
  /// Steps between Hermiticity re-symmetrizations of the 00/11 blocks.
  /// 0 disables (used by the algebraic step tests).
  int resym_interval = 1;
  /// Rescale the normalized form by 1/sum_j tr(b11_j) after every step.
  /// This is the projection the continuous-time law preserves; it keeps
  /// the O(dt) Euler normalization drift from accumulating.
  bool project_each_step = true;
};

/// Conditional-expectation state in the dual (density-side)
/// representation: for each fault mode j the three matrices b00, b10, b11
/// represent the scalar functionals via sigma_ab^j(X) = tr(b_ab^j X).
/// The 01 block is never integrated; it is the adjoint of b10 by the
/// structural identity sigma_01(X) = conj(sigma_10(X^dag)).
struct FilterState {
  struct ModeBlocks {
    Operator b00, b10, b11;
  };

  double t = 0.0;
  FilterForm form = FilterForm::Normalized;
  double log_normalizer = 0.0;  // accumulated by Zakai renormalizations
  long steps_taken = 0;
  long clamped_steps = 0;  // steps evaluated past the omega floor

  std::vector<ModeBlocks> modes;

  int num_modes() const { return static_cast<int>(modes.size()); }
  int dim() const { return modes.empty() ? 0 : static_cast<int>(modes[0].b11.rows()); }
  Operator block01(int j) const { return modes[static_cast<std::size_t>(j)].b10.adjoint(); }

  /// sum_j Re tr(b11_j); 1 for a healthy normalized state.
  double mass() const;
};

struct StepResult {
  double innovation_drift = 0.0;  // K_t of the (implicitly normalized) state
  double innovation = 0.0;        // dW = dY - K_t dt
  bool clamped = false;           // xi forced to 0 at this step (omega floor)
};

/// Block index order used by estimates: 00, 01, 10, 11.
inline constexpr int kBlock00 = 0;
inline constexpr int kBlock01 = 1;
inline constexpr int kBlock10 = 2;
inline constexpr int kBlock11 = 3;

struct BlockEstimates {
  std::array<std::vector<Complex>, 4> per_mode;
  std::array<Complex, 4> aggregate;
};

/// Fault-tolerant filter for a single-photon-driven plant whose
/// Hamiltonian switches with a hidden Markov fault mode. Propagates, per
/// mode, the coupled quadruple of conditional expectations driven by the
/// homodyne record, in normalized or linear (Zakai) form.
///
/// Not thread-safe: holds per-step scratch. Create one instance per
/// trajectory worker; the model inputs are copied in.
class FaultTolerantFilter {
 public:
  FaultTolerantFilter(PlantModel plant, FaultModel fault, Wavepacket w,
                      FilterConfig config = {});

  FilterState init_state() const;

  /// One Euler-Maruyama step of the configured form.
  StepResult step(FilterState& state, double dY, double dt);

  /// Nonlinear (normalized) update: innovation dW = dY - K_t dt, with the
  /// -K_t * block correction in the diffusion.
  StepResult step_normalized(FilterState& state, double dY, double dt);

  /// Linear update driven directly by dY; no K_t terms. Periodically
  /// rescaled, accumulating the log-normalizer.
  StepResult step_zakai(FilterState& state, double dY, double dt);

  /// Divides all blocks by sum_j tr(b11_j). Throws DivergenceError on a
  /// nonpositive normalizer.
  static void normalize(FilterState& state);

  /// Per-mode and aggregate sigma_ab(X); Zakai states are implicitly
  /// normalized (the quotient is scale-invariant).
  BlockEstimates estimate(const FilterState& state, const Operator& X) const;

  /// K_t = sum_k [ tr(b11_k (L + L^dag)) + 2 Re(xi(t) tr(b10_k)) ] of the
  /// implicitly normalized state.
  double innovation_drift(const FilterState& state) const;

  /// Per-mode innovation-drift components sigma_t^j(L + L^dag); the
  /// fault-detection gain is G_j = component_j - p_hat_j * K_t.
  std::vector<double> innovation_drift_components(const FilterState& state) const;

  const PlantModel& plant() const { return plant_; }
  const FaultModel& fault() const { return fault_; }
  const Wavepacket& wavepacket() const { return wave_; }
  const FilterConfig& config() const { return config_; }

 private:
  struct Derivs {
    Operator a00, a10, a11;  // drift
    Operator d00, d10, d11;  // diffusion coefficient (without -K terms)
  };

  Complex effective_xi(double t, bool& clamped) const;
  void compute_derivs(const FilterState& state, Complex xi, std::vector<Derivs>& out) const;
  double raw_innovation_drift(const FilterState& state, Complex xi) const;
  void apply_projections(FilterState& state);

  PlantModel plant_;
  FaultModel fault_;
  Wavepacket wave_;
  FilterConfig config_;

  Operator coupling_dag_;       // L^dag
  Operator coupling_sq_;        // L^dag L
  Operator coupling_re2_;       // L + L^dag
  std::vector<Derivs> scratch_;
};

/// Single-photon filter with a fixed (known) mode path: the no-fault
/// reference filter. Deliberately an independent code path from
/// FaultTolerantFilter so the two can cross-check each other; also the
/// conditional propagator used by the trajectory generator, where the
/// Hamiltonian follows the sampled fault path.
struct ReferenceState {
  double t = 0.0;
  long clamped_steps = 0;
  Operator b00, b10, b11;
};

class ReferenceFilter {
 public:
  ReferenceFilter(Operator coupling, Wavepacket w);

  ReferenceState init(const DensityMatrix& initial_state) const;

  /// One Euler-Maruyama step with the given (possibly time-varying)
  /// Hamiltonian.
  StepResult step(ReferenceState& state, const Operator& hamiltonian,
                  double dY, double dt) const;

  /// K-bar of the current state.
  double innovation_drift(const ReferenceState& state) const;

  const Wavepacket& wavepacket() const { return wave_; }

 private:
  Operator coupling_, coupling_dag_, coupling_sq_, coupling_re2_;
  Wavepacket wave_;
};

}  // namespace spqf

#endif
