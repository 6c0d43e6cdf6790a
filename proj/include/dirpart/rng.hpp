#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dirpart {

/// Deterministic random source. mt19937_64 output is fully specified by the
/// standard; the distribution transforms below are written out by hand so a
/// fixed seed produces the same stream on every platform and stdlib.
class Rng {
public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  /// Generator for restart `index` derived from a base seed. Restarts are
  /// individually reproducible without consuming each other's stream.
  static Rng for_restart(uint64_t base_seed, int index) {
    std::seed_seq seq{base_seed, static_cast<uint64_t>(index) + 1};
    std::mt19937_64 g(seq);
    Rng r(0);
    r.gen_ = g;
    return r;
  }

  uint64_t bits() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % span);
  }

  /// Standard normal via Box-Muller (polar-free form, deterministic).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double m = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = m * std::sin(two_pi * u2);
    have_spare_ = true;
    return m * std::cos(two_pi * u2);
  }

private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

} // namespace dirpart
