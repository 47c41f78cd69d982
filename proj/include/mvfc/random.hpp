#pragma once

// Seed derivation and a small portable random source.
//
// std::*_distribution output is implementation-defined, so the distributions
// used for data generation and shuffling are written out here on top of
// std::mt19937_64, whose output sequence is fixed by the standard.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace mvfc {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// FNV-1a over raw bytes.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t h = 0xCBF29CE484222325ULL) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Seed for a named pipeline stage: splitmix64(seed ^ fnv1a64(name)).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) noexcept {
  return splitmix64(seed ^ fnv1a64(name));
}

/// Seed for the feature pair {i, j}. Symmetric in (i, j).
///
/// Layout: h0 = splitmix64(seed); h1 = splitmix64(h0 ^ lo);
/// result = splitmix64(h1 ^ (hi << 32 | hi >> 32)), where lo = min(i, j) and
/// hi = max(i, j) as 64-bit unsigned integers.
constexpr std::uint64_t pair_seed(std::uint64_t seed, std::uint64_t i, std::uint64_t j) noexcept {
  const std::uint64_t lo = i < j ? i : j;
  const std::uint64_t hi = i < j ? j : i;
  const std::uint64_t h0 = splitmix64(seed);
  const std::uint64_t h1 = splitmix64(h0 ^ lo);
  return splitmix64(h1 ^ ((hi << 32) | (hi >> 32)));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound); rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} - bound + 1) % bound;
    std::uint64_t x = engine_();
    while (x < limit) x = engine_();
    return x % bound;
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mvfc
