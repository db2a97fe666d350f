#ifndef SPQF_RNG_HPP
#define SPQF_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace spqf {

/// splitmix64 mixing step. Used both to expand a master seed into
/// per-trajectory substream seeds and to decorrelate poor seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives the seed of substream `index` from a master seed. Substreams
/// are what make ensemble results independent of worker count: each
/// trajectory consumes only its own stream.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = master ^ (0x6a09e667f3bcc909ULL + index * 0x3c6ef372fe94f82bULL);
  std::uint64_t b = splitmix64(s);
  return a ^ (b + index);
}

/// Deterministic random stream. mt19937_64 is fully specified by the
/// standard; the distributions below are hand-rolled (std::*_distribution
/// algorithms are implementation-defined, which would break the
/// byte-identical-output contract across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t master, std::uint64_t index) {
    return Rng(substream_seed(master, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  /// N(0, sqrt(dt)) Wiener increment.
  double wiener_increment(double dt) { return normal() * std::sqrt(dt); }

  /// Exponential holding time with the given rate (> 0).
  double exponential(double rate) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return -std::log(u) / rate;
  }

  /// Index drawn proportionally to the (nonnegative) weights.
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      x -= weights[i];
      if (x < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace spqf

#endif
