#include "spqf/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spqf {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double fa, double fm, double fb, double whole, double tol,
                int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

void require_nonnegative_time(double t) {
  if (t < 0.0) {
    std::ostringstream msg;
    msg << "wavepacket evaluated at negative time " << t;
    throw ConfigError(msg.str());
  }
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb), abs_tol,
                  48);
}

Wavepacket Wavepacket::exponential(double gamma, double omega_floor,
                                   double phase_angle) {
  if (gamma <= 0.0) throw ConfigError("exponential wavepacket needs gamma > 0");
  Wavepacket w;
  w.shape_ = Shape::Exponential;
  w.gamma_ = gamma;
  w.omega_floor_ = omega_floor;
  w.phase_ = std::polar(1.0, phase_angle);
  w.check_normalized();
  return w;
}

Wavepacket Wavepacket::gaussian(double center, double width,
                                double omega_floor, double phase_angle) {
  if (width <= 0.0) throw ConfigError("gaussian wavepacket needs width > 0");
  Wavepacket w;
  w.shape_ = Shape::Gaussian;
  w.center_ = center;
  w.width_ = width;
  w.omega_floor_ = omega_floor;
  w.phase_ = std::polar(1.0, phase_angle);
  w.check_normalized();
  return w;
}

Wavepacket Wavepacket::square(double t_a, double t_b, double omega_floor,
                              double phase_angle) {
  if (t_a < 0.0 || t_b <= t_a) {
    throw ConfigError("square wavepacket needs 0 <= t_a < t_b");
  }
  Wavepacket w;
  w.shape_ = Shape::Square;
  w.t_a_ = t_a;
  w.t_b_ = t_b;
  w.omega_floor_ = omega_floor;
  w.phase_ = std::polar(1.0, phase_angle);
  w.check_normalized();
  return w;
}

Wavepacket Wavepacket::tabulated(double dt, std::vector<Complex> values,
                                 double omega_floor, double phase_angle) {
  if (dt <= 0.0 || values.empty()) {
    throw ConfigError("tabulated wavepacket needs dt > 0 and values");
  }
  double energy = 0.0;
  for (const Complex& v : values) energy += std::norm(v) * dt;
  if (energy <= 0.0) throw ConfigError("tabulated wavepacket has zero energy");
  const double scale = 1.0 / std::sqrt(energy);
  for (Complex& v : values) v *= scale;

  Wavepacket w;
  w.shape_ = Shape::Tabulated;
  w.table_dt_ = dt;
  w.table_ = std::move(values);
  w.table_tail_.assign(w.table_.size() + 1, 0.0);
  for (std::size_t k = w.table_.size(); k-- > 0;) {
    w.table_tail_[k] = w.table_tail_[k + 1] + std::norm(w.table_[k]) * dt;
  }
  w.omega_floor_ = omega_floor;
  w.phase_ = std::polar(1.0, phase_angle);
  w.check_normalized();
  return w;
}

Complex Wavepacket::xi(double t) const {
  require_nonnegative_time(t);
  switch (shape_) {
    case Shape::Exponential:
      return phase_ * std::sqrt(gamma_) * std::exp(-0.5 * gamma_ * t);
    case Shape::Gaussian: {
      // Normalized over [0, inf): amplitude^2 integrates via erfc.
      const double z0 = -center_ / (std::sqrt(2.0) * width_);
      const double norm2 =
          width_ * std::sqrt(M_PI / 2.0) * std::erfc(z0);
      const double u = (t - center_) / (2.0 * width_);
      return phase_ * std::exp(-u * u) / std::sqrt(norm2);
    }
    case Shape::Square:
      if (t >= t_a_ && t < t_b_) {
        return phase_ / std::sqrt(t_b_ - t_a_);
      }
      return {0.0, 0.0};
    case Shape::Tabulated: {
      const auto k = static_cast<std::size_t>(t / table_dt_);
      if (k >= table_.size()) return {0.0, 0.0};
      return phase_ * table_[k];
    }
  }
  return {0.0, 0.0};
}

double Wavepacket::omega(double t) const {
  require_nonnegative_time(t);
  switch (shape_) {
    case Shape::Exponential:
      return std::exp(-gamma_ * t);
    case Shape::Gaussian: {
      const double z = (t - center_) / (std::sqrt(2.0) * width_);
      const double z0 = -center_ / (std::sqrt(2.0) * width_);
      return std::erfc(z) / std::erfc(z0);
    }
    case Shape::Square:
      if (t <= t_a_) return 1.0;
      if (t >= t_b_) return 0.0;
      return (t_b_ - t) / (t_b_ - t_a_);
    case Shape::Tabulated: {
      const double end = table_dt_ * static_cast<double>(table_.size());
      if (t >= end) return 0.0;
      const auto k = static_cast<std::size_t>(t / table_dt_);
      const double cell_start = static_cast<double>(k) * table_dt_;
      return table_tail_[k] - std::norm(table_[k]) * (t - cell_start);
    }
  }
  return 0.0;
}

Complex Wavepacket::lambda(double t) const {
  const double om = omega(t);
  if (om < omega_floor_) return {0.0, 0.0};
  return xi(t) / std::sqrt(om);
}

double Wavepacket::support_hint() const {
  switch (shape_) {
    case Shape::Exponential:
      return 40.0 / gamma_;
    case Shape::Gaussian:
      return center_ + 10.0 * width_;
    case Shape::Square:
      return t_b_;
    case Shape::Tabulated:
      return table_dt_ * static_cast<double>(table_.size());
  }
  return 0.0;
}

void Wavepacket::check_normalized() const {
  const double total = integrate_adaptive(
      [this](double t) { return std::norm(xi(t)); }, 0.0, support_hint(),
      1e-10);
  if (std::abs(total - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "wavepacket energy " << total << " is not 1 within 1e-6";
    throw ConfigError(msg.str());
  }
}

}  // namespace spqf
