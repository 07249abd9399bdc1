#ifndef PMEANS_RNG_HPP
#define PMEANS_RNG_HPP

#include <bit>
#include <cmath>
#include <cstdint>

#include "pmeans/circle.hpp"

namespace pmeans {

namespace detail {

// One-sided ziggurat layer table for a decreasing density on [0, inf).
// Layer 0 is the base strip [0, r] x [0, f(r)] plus the analytic tail; layers
// 1..n-1 are equal-area rectangles stacked above it.
template <int N>
struct ZigTable {
  double x[N + 1];  // x[0] = v / f(r) (pseudo-width of the base), x[1] = r
  double f[N + 1];  // f[i] = density at x[i], f[N] = 1
};

inline const ZigTable<128>& normal_zig() {
  static const ZigTable<128> t = [] {
    ZigTable<128> t{};
    const double r = 3.442619855899;
    const double v = 9.91256303526217e-3;
    auto fn = [](double x) { return std::exp(-0.5 * x * x); };
    t.x[1] = r;
    t.f[1] = fn(r);
    t.x[0] = v / t.f[1];
    t.f[0] = 1.0;
    for (int i = 2; i <= 128; ++i) {
      t.f[i] = t.f[i - 1] + v / t.x[i - 1];
      t.x[i] = (t.f[i] >= 1.0) ? 0.0 : std::sqrt(-2.0 * std::log(t.f[i]));
    }
    t.x[128] = 0.0;
    t.f[128] = 1.0;
    return t;
  }();
  return t;
}

inline const ZigTable<256>& exp_zig() {
  static const ZigTable<256> t = [] {
    ZigTable<256> t{};
    const double r = 7.69711747013104972;
    const double v = 0.0039496598225815571993;
    auto fn = [](double x) { return std::exp(-x); };
    t.x[1] = r;
    t.f[1] = fn(r);
    t.x[0] = v / t.f[1];
    t.f[0] = 1.0;
    for (int i = 2; i <= 256; ++i) {
      t.f[i] = t.f[i - 1] + v / t.x[i - 1];
      t.x[i] = (t.f[i] >= 1.0) ? 0.0 : -std::log(t.f[i]);
    }
    t.x[256] = 0.0;
    t.f[256] = 1.0;
    return t;
  }();
  return t;
}

}  // namespace detail

// Counter-based splittable random stream (splitmix64). The mixing function
// and the substream derivation below are part of the reproducibility
// contract: the same (seed, index) always yields the same stream, on every
// platform, independently of how other streams are consumed.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Seed of substream `index` of the stream identified by `seed`.
  static std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
  }

  /// Substream `index` of the stream identified by `seed`.
  static Rng split(std::uint64_t seed, std::uint64_t index) {
    return Rng(split_seed(seed, index));
  }

  std::uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Exponential(1), via a 256-layer ziggurat.
  double exponential() {
    const auto& t = detail::exp_zig();
    double extra = 0.0;
    for (;;) {
      const std::uint64_t b = next_u64();
      const int i = static_cast<int>(b & 255);
      const double u = static_cast<double>(b >> 11) * 0x1.0p-53;
      const double x = u * t.x[i];
      if (x < t.x[i + 1]) return extra + x;  // fully under the density
      if (i == 0) {
        if (x < t.x[1]) return extra + x;  // inside the base rectangle
        extra += t.x[1];                   // tail: memoryless restart at r
        continue;
      }
      const double y = t.f[i] + uniform() * (t.f[i + 1] - t.f[i]);
      if (y < std::exp(-x)) return extra + x;
    }
  }

  /// Standard normal, via a 128-layer ziggurat.
  double normal() {
    const auto& t = detail::normal_zig();
    for (;;) {
      const std::uint64_t b = next_u64();
      const int i = static_cast<int>(b & 127);
      // sign from a spare bit, applied without a data-dependent branch
      const std::uint64_t sbit = (b & 128) << 56;
      const double u = static_cast<double>(b >> 11) * 0x1.0p-53;
      const double x = u * t.x[i];
      if (x < t.x[i + 1])
        return std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) ^ sbit);
      if (i == 0) {
        if (x < t.x[1])
          return std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) ^ sbit);
        // Marsaglia tail beyond r
        const double r = t.x[1];
        double xt, yt;
        do {
          xt = -std::log(uniform_pos()) / r;
          yt = -std::log(uniform_pos());
        } while (yt + yt < xt * xt);
        return std::bit_cast<double>(std::bit_cast<std::uint64_t>(r + xt) ^ sbit);
      }
      const double y = t.f[i] + uniform() * (t.f[i + 1] - t.f[i]);
      if (y < std::exp(-0.5 * x * x))
        return std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) ^ sbit);
    }
  }

  /// Uniform point on the circle, in (-pi, pi].
  CirclePoint uniform_circle() { return CirclePoint(pi * (1.0 - 2.0 * uniform())); }

  /// Von Mises(mu, kappa) via Best-Fisher rejection.
  double von_mises(double mu, double kappa) {
    if (kappa < 1e-8) return uniform_circle().theta;
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double r = (1.0 + rho * rho) / (2.0 * rho);
    for (;;) {
      const double u1 = uniform_pos();
      const double z = std::cos(pi * uniform());
      const double f = (1.0 + r * z) / (r + z);
      const double c = kappa * (r - f);
      if (c * (2.0 - c) - u1 > 0.0 ||
          std::log(c / u1) + 1.0 - c >= 0.0) {
        const double sign = (uniform() < 0.5) ? -1.0 : 1.0;
        return canonical(mu + sign * std::acos(f));
      }
    }
  }

};

}  // namespace pmeans

#endif
