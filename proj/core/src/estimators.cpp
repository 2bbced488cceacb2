#include "relay/estimators.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <string>

#include "relay/error.hpp"

namespace relay::estimators {

namespace {

// Ratio estimator sum(y) / sum(x) over batches with the batch-means
// standard error; reduces to sd(batch means) / sqrt(b) for equal batches.
template <class Numerator>
Estimate batch_ratio(const RunReport& report, Numerator numerator) {
  if (!(report.total_time > 0.0)) {
    throw ModelError(ErrorCode::InvalidArgument, "report covers no time");
  }
  const auto& batches = report.batches;
  if (batches.size() < kMinBatches) {
    throw ModelError(ErrorCode::TooFewBatches, std::to_string(batches.size()) + " batches");
  }
  double total_y = 0.0, total_x = 0.0;
  for (const auto& b : batches) {
    total_y += numerator(b);
    total_x += b.length;
  }
  const double point = total_y / total_x;
  const double n = static_cast<double>(batches.size());
  const double mean_x = total_x / n;
  double ss = 0.0;
  for (const auto& b : batches) {
    const double w = b.length / mean_x;
    const double dev = numerator(b) / b.length - point;
    ss += w * w * dev * dev;
  }
  return {point, std::sqrt(ss / (n * (n - 1.0)))};
}

Estimate mean_of(std::span<const CycleRecord> cycles, double (*field)(const CycleRecord&)) {
  const double n = static_cast<double>(cycles.size());
  double sum = 0.0;
  for (const auto& c : cycles) sum += field(c);
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& c : cycles) ss += (field(c) - mean) * (field(c) - mean);
  const double se = cycles.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {mean, se};
}

Estimate proportion(std::size_t hits, std::size_t n) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

}  // namespace

Estimate speed_estimate(const RunReport& report) {
  return batch_ratio(report, [](const Batch& b) { return b.displacement; });
}

Estimate cost_estimate(const RunReport& report) {
  return batch_ratio(report, [](const Batch& b) { return b.jumps; });
}

Estimate direction_estimate(const RunReport& report) {
  return batch_ratio(report, [](const Batch& b) { return b.clockwise_time; });
}

Estimate cycle_length(std::span<const CycleRecord> cycles) {
  if (cycles.empty()) throw ModelError(ErrorCode::NoCycles, "no complete cycles");
  return mean_of(cycles, [](const CycleRecord& c) { return c.length; });
}

KacCheck kac_check(std::span<const CycleRecord> cycles, const Estimate& long_run) {
  if (cycles.size() < kMinKacCycles) {
    throw ModelError(ErrorCode::TooFewCycles, std::to_string(cycles.size()) + " cycles");
  }
  const Estimate sums = mean_of(cycles, [](const CycleRecord& c) { return c.displacement; });
  const Estimate length = cycle_length(cycles);

  KacCheck out;
  out.cycles = cycles.size();
  out.mean_cycle_length = length;
  out.lhs = sums.point;
  out.rhs = length.point * long_run.point;
  const double rhs_var = std::pow(long_run.point * length.std_error, 2) +
                         std::pow(length.point * long_run.std_error, 2);
  const double combined = std::sqrt(sums.std_error * sums.std_error + rhs_var);
  const double scale = std::abs(out.rhs);
  out.relative_gap = std::abs(out.lhs - out.rhs) / scale;
  out.relative_std_error = combined / scale;
  return out;
}

ExcursionStats excursion_classifier(std::span<const CycleRecord> cycles, double span) {
  if (cycles.empty()) throw ModelError(ErrorCode::NoCycles, "no complete cycles");
  std::size_t around = 0, jumped = 0;
  ExcursionStats out;
  for (const auto& c : cycles) {
    const double to_zero = std::abs(c.relative_displacement);
    const double to_span = std::abs(c.relative_displacement - span);
    if (to_span < to_zero) ++around;
    if (c.jumps > 0) ++jumped;
    out.max_classification_error = std::max(out.max_classification_error, std::min(to_zero, to_span));
  }
  out.cycles = cycles.size();
  out.around = proportion(around, cycles.size());
  out.with_jump = proportion(jumped, cycles.size());
  return out;
}

ChiSquare uniformity_test(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) throw ModelError(ErrorCode::InvalidArgument, "need at least two cells");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  if (expected < kMinExpectedPerCell) {
    throw ModelError(ErrorCode::TooFewSamples,
                     "expected " + std::to_string(expected) + " samples per cell");
  }
  ChiSquare out;
  for (auto c : counts) {
    const double diff = static_cast<double>(c) - expected;
    out.statistic += diff * diff / expected;
  }
  out.dof = static_cast<double>(counts.size() - 1);
  out.p_value = boost::math::gamma_q(out.dof / 2.0, out.statistic / 2.0);
  return out;
}

}  // namespace relay::estimators
