#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "qcar/types.hpp"

namespace qcar {

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Stable stage-seed derivation: one master seed fans out into independent,
/// reproducible per-stage streams keyed by a label.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) {
  return splitmix64(master ^ fnv1a64(stage));
}

/// Deterministic Gaussian source: mt19937_64 plus an explicit Box-Muller transform with a
/// cached spare. std::normal_distribution's algorithm is implementation-defined, so it is
/// avoided; this generator produces the same stream for the same seed on any platform.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Standard normal deviate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // in (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qcar
