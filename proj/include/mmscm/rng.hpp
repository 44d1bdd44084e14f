// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mmscm {

// splitmix64 step; used to whiten seeds and derive substreams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream. mt19937_64 ships a fully specified sequence,
// and the distribution transforms below are hand-rolled, so identical seeds
// give identical draws on every platform and standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Independent child stream; distinct (seed, index) pairs map to distinct
  // engine seeds because splitmix64 is a bijection on its state.
  static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t root = splitmix64_next(s);
    std::uint64_t t = root + 0x9e3779b97f4a7c15ULL * (index + 1);
    return RandomStream(splitmix64_next(t));
  }

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n); Lemire multiply-shift.
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  // Standard normal via Box-Muller with a cached spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// One sample of normalized Rician fading power (unit mean): |v + x + iy|^2
// with v^2 = k/(k+1) and per-component scatter variance 1/(2(k+1)).
inline double rician_power(RandomStream& rng, double k_linear) {
  double v = std::sqrt(k_linear / (k_linear + 1.0));
  double sigma = std::sqrt(0.5 / (k_linear + 1.0));
  double re = v + sigma * rng.normal();
  double im = sigma * rng.normal();
  return re * re + im * im;
}

}  // namespace mmscm
