#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "zkpos/common/rng.hpp"

namespace zkpos::kernels {

struct TrialStats {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;

  double rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
  /// Wilson score interval at 95%.
  std::pair<double, double> ci95() const {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054, n = static_cast<double>(trials), p = rate();
    const double denom = 1 + z * z / n;
    const double centre = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
  }
};

/// Runs trial(rng, index) -> bool for index in [0, n). Trial i always sees
/// Rng(derive_seed(seed, i)), so the count does not depend on scheduling.
template <class F>
TrialStats run_trials(std::uint64_t n, std::uint64_t seed, F&& trial) {
  std::uint64_t hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(dynamic, 16)
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    hits += trial(rng, i) ? 1 : 0;
  }
  return {n, hits};
}

/// Serial form of run_trials; identical results.
template <class F>
TrialStats run_trials_serial(std::uint64_t n, std::uint64_t seed, F&& trial) {
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    hits += trial(rng, i) ? 1 : 0;
  }
  return {n, hits};
}

}  // namespace zkpos::kernels
