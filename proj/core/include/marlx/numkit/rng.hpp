#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace marlx::numkit {

/// Counter-based deterministic RNG (splitmix64). The same seed always yields
/// the same stream, and split("name") derives an independent stream from the
/// parent seed and the name only, so adding or removing one consumer never
/// shifts the draws seen by another.
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller. Consumes two uniforms per draw.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Independent child stream named after its consumer. Derived from the
  /// parent seed, not the parent position, so splits commute.
  SeededRng split(std::string_view name) const {
    return SeededRng(mix(seed_ ^ mix(fnv1a(name))));
  }

  SeededRng split(std::string_view name, std::uint64_t index) const {
    return SeededRng(mix(seed_ ^ mix(fnv1a(name) + 0x632BE59BD9B4E019ull * (index + 1))));
  }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ull;
    }
    return h;
  }

  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace marlx::numkit
