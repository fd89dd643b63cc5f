#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace zkpos {

/// SplitMix64 finalizer. Used to derive independent per-trial and
/// per-component seeds from a scenario seed.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream + 0x632BE59BD9B4E019ull));
}

/// Seeded generator with platform-independent derived draws.
///
/// std::mt19937_64 output is fully specified by the standard; the standard
/// distributions are not, so every derived quantity is computed here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t u64() { return engine_(); }
  int bit() { return static_cast<int>(engine_() >> 63); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, n), rejection sampled. n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  std::vector<std::uint8_t> bits(std::size_t n) {
    std::vector<std::uint8_t> out(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) word = engine_();
      out[i] = static_cast<std::uint8_t>((word >> (63 - i % 64)) & 1u);
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace zkpos
