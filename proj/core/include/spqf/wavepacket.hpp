#ifndef SPQF_WAVEPACKET_HPP
#define SPQF_WAVEPACKET_HPP

#include <functional>
#include <vector>

#include "spqf/types.hpp"

namespace spqf {

/// Single-photon wavepacket xi(t), its tail energy
/// omega(t) = int_t^inf |xi|^2, and the ancilla coupling
/// lambda(t) = xi(t)/sqrt(omega(t)).
///
/// The t -> infinity singularity of lambda is regularized by a floor on
/// omega: once omega(t) < omega_floor the photon is numerically exhausted
/// and the ancilla is decoupled (lambda = 0, and consumers treat xi as 0).
/// Immutable after construction; safe to share across threads.
class Wavepacket {
 public:
  enum class Shape { Exponential, Gaussian, Square, Tabulated };

  /// xi(t) = sqrt(gamma) exp(-gamma t / 2); omega(t) = exp(-gamma t).
  static Wavepacket exponential(double gamma, double omega_floor = 1e-8,
                                double phase_angle = 0.0);

  /// Gaussian envelope centered at `center` with RMS-like width `width`,
  /// renormalized over [0, inf). omega has a closed form via erfc.
  static Wavepacket gaussian(double center, double width,
                             double omega_floor = 1e-8,
                             double phase_angle = 0.0);

  /// Unit-energy box on [t_a, t_b); omega ramps linearly to zero.
  static Wavepacket square(double t_a, double t_b, double omega_floor = 1e-8,
                           double phase_angle = 0.0);

  /// Piecewise-constant xi on a uniform grid of step `dt`, renormalized at
  /// load. Value k applies on [k dt, (k+1) dt).
  static Wavepacket tabulated(double dt, std::vector<Complex> values,
                              double omega_floor = 1e-8,
                              double phase_angle = 0.0);

  Complex xi(double t) const;
  double omega(double t) const;

  /// xi(t)/sqrt(omega(t)), exactly 0 once decoupled.
  Complex lambda(double t) const;

  /// True once omega(t) < omega_floor (photon fully emitted).
  bool decoupled(double t) const { return omega(t) < omega_floor_; }

  /// xi(t) with the decoupling clamp applied; what the filter and the
  /// trajectory generator consume.
  Complex xi_effective(double t) const {
    return decoupled(t) ? Complex{0.0, 0.0} : xi(t);
  }

  Shape shape() const { return shape_; }
  double omega_floor() const { return omega_floor_; }

  /// Time beyond which the remaining pulse energy is negligible (< 1e-16).
  double support_hint() const;

 private:
  Wavepacket() = default;
  void check_normalized() const;

  Shape shape_ = Shape::Exponential;
  double gamma_ = 1.0;                // exponential
  double center_ = 0.0, width_ = 1.0; // gaussian
  double t_a_ = 0.0, t_b_ = 1.0;      // square
  double table_dt_ = 0.0;             // tabulated
  std::vector<Complex> table_;
  std::vector<double> table_tail_;    // omega at cell boundaries
  double omega_floor_ = 1e-8;
  Complex phase_{1.0, 0.0};
};

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-10);

}  // namespace spqf

#endif
