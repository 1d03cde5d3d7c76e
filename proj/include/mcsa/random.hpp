#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mcsa {

// Every random draw in the toolkit goes through this header. The algorithms
// are fixed so that identical seeds give identical streams on any platform:
//
//   engine    std::mt19937_64 (fully specified by the standard)
//   uniform   (engine() >> 11) * 2^-53, in [0, 1)
//   gaussian  Box-Muller, cosine branch then sine branch of each pair
//   index     engine() % bound (bias < 2^-40 for the sizes used here)
//
// std::normal_distribution and friends are avoided on purpose: their output
// is implementation defined.

/// SplitMix64 finaliser, used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b = 0) noexcept {
  return mix_seed(mix_seed(mix_seed(parent) ^ a) ^ b);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t index(std::uint64_t bound) { return engine_() % bound; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mcsa
