#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "relay/run_report.hpp"

namespace relay::estimators {

struct Estimate {
  double point = 0.0;
  double std_error = 0.0;
};

/// Batch-means standard errors need at least this many batches.
inline constexpr std::size_t kMinBatches = 20;

/// Long-run message speed: displacement per unit time.
Estimate speed_estimate(const RunReport& report);
/// Long-run jumps per unit time.
Estimate cost_estimate(const RunReport& report);
/// Fraction of time the message moves clockwise.
Estimate direction_estimate(const RunReport& report);

/// Mean and standard error of the cycle lengths.
Estimate cycle_length(std::span<const CycleRecord> cycles);

/// Cycle-sum identity E[sum of f over a cycle] = E[cycle length] * pi(f) with
/// f the message velocity. `long_run` must come from an independent run.
struct KacCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_gap = 0.0;
  /// Combined standard error of lhs - rhs, relative to |rhs|.
  double relative_std_error = 0.0;
  Estimate mean_cycle_length;
  std::size_t cycles = 0;

  [[nodiscard]] bool within(double sigmas) const noexcept {
    return relative_gap < sigmas * relative_std_error;
  }
};
inline constexpr std::size_t kMinKacCycles = 100;
KacCheck kac_check(std::span<const CycleRecord> cycles, const Estimate& long_run);

/// Splits m = 2 excursions into those that went around the circle (relative
/// displacement equal to `span`) and those that came back (displacement 0).
struct ExcursionStats {
  Estimate around;
  Estimate with_jump;
  /// Largest distance of a relative displacement from {0, span}.
  double max_classification_error = 0.0;
  std::size_t cycles = 0;
};
ExcursionStats excursion_classifier(std::span<const CycleRecord> cycles, double span);

/// Pearson chi-square against equal cell probabilities.
struct ChiSquare {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 0.0;
};
inline constexpr double kMinExpectedPerCell = 20.0;
ChiSquare uniformity_test(std::span<const std::uint64_t> counts);

}  // namespace relay::estimators
