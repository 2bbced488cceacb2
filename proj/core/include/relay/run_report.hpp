#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace relay {

enum class ModelKind { Discrete, Continuous };

/// Totals over one contiguous slice of the measurement window.
struct Batch {
  double length = 0.0;
  double displacement = 0.0;
  double jumps = 0.0;
  double clockwise_time = 0.0;
};

/// One excursion between consecutive visits to the regeneration set
/// (carrier co-located with a walker moving the opposite way).
struct CycleRecord {
  double length = 0.0;
  /// Signed distance travelled by the message during the cycle.
  double displacement = 0.0;
  /// Unwrapped displacement of the starting carrier relative to its
  /// starting partner; 0 or RunReport::cycle_span for m = 2.
  double relative_displacement = 0.0;
  int jumps = 0;
};

struct TracePoint {
  double time = 0.0;
  double running_speed = 0.0;
  double running_cost = 0.0;
};

/// Long-run statistics of one trajectory, or of several merged ones.
struct RunReport {
  ModelKind model = ModelKind::Discrete;
  double total_time = 0.0;
  /// Sum of D_t(I_t) (discrete) or integral of v * D_s(I_s) (continuous).
  double displacement_sum = 0.0;
  std::int64_t jump_count = 0;
  std::int64_t meeting_count = 0;
  double clockwise_time = 0.0;
  /// Maximum message speed: 1 for the lattice model, v for the continuous one.
  double max_speed = 1.0;
  /// Relative displacement of an excursion that goes around the circle:
  /// 2N on the lattice, N on the continuous circle.
  double cycle_span = 0.0;
  std::vector<Batch> batches;
  std::vector<CycleRecord> cycles;
  /// Histogram of (X, D) cells sampled at widely spaced times; empty unless
  /// uniformity sampling was requested.
  std::vector<std::uint64_t> cell_counts;
  /// Per-trajectory only; merge() drops it.
  std::vector<TracePoint> running_trace;

  [[nodiscard]] double direction_occupation() const noexcept;
};

/// Statistics of the concatenation of two trajectories. Counts, sums, batches,
/// cycles and histograms combine associatively.
RunReport merge(const RunReport& a, const RunReport& b);

/// Accumulates piecewise-constant message motion over a window [0, length)
/// split into equal batches.
class WindowAccumulator {
 public:
  WindowAccumulator(double length, int batch_count, bool integral_boundaries);

  /// Motion at signed velocity `velocity` over [t0, t1) in window time.
  void add_segment(double t0, double t1, double velocity, bool clockwise);
  void add_jump(double t);

  [[nodiscard]] const std::vector<Batch>& batches() const noexcept { return batches_; }
  [[nodiscard]] double displacement() const noexcept { return displacement_; }
  [[nodiscard]] double clockwise_time() const noexcept { return clockwise_time_; }
  [[nodiscard]] std::int64_t jumps() const noexcept { return jumps_; }

 private:
  std::size_t batch_of(double t) const noexcept;

  std::vector<double> bounds_;
  std::vector<Batch> batches_;
  std::size_t cursor_ = 0;
  double displacement_ = 0.0;
  double clockwise_time_ = 0.0;
  std::int64_t jumps_ = 0;
};

}  // namespace relay
