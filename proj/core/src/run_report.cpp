#include "relay/run_report.hpp"

#include <algorithm>
#include <cmath>

#include "relay/error.hpp"

namespace relay {

double RunReport::direction_occupation() const noexcept {
  return total_time > 0.0 ? clockwise_time / total_time : 0.0;
}

RunReport merge(const RunReport& a, const RunReport& b) {
  if (a.model != b.model) {
    throw ModelError(ErrorCode::InvalidArgument, "cannot merge reports of different models");
  }
  RunReport out;
  out.model = a.model;
  out.total_time = a.total_time + b.total_time;
  out.displacement_sum = a.displacement_sum + b.displacement_sum;
  out.jump_count = a.jump_count + b.jump_count;
  out.meeting_count = a.meeting_count + b.meeting_count;
  out.clockwise_time = a.clockwise_time + b.clockwise_time;
  out.max_speed = std::max(a.max_speed, b.max_speed);
  out.cycle_span = a.cycle_span != 0.0 ? a.cycle_span : b.cycle_span;

  out.batches = a.batches;
  out.batches.insert(out.batches.end(), b.batches.begin(), b.batches.end());
  out.cycles = a.cycles;
  out.cycles.insert(out.cycles.end(), b.cycles.begin(), b.cycles.end());

  if (a.cell_counts.empty()) {
    out.cell_counts = b.cell_counts;
  } else if (b.cell_counts.empty()) {
    out.cell_counts = a.cell_counts;
  } else {
    if (a.cell_counts.size() != b.cell_counts.size()) {
      throw ModelError(ErrorCode::InvalidArgument, "uniformity histograms differ in size");
    }
    out.cell_counts = a.cell_counts;
    for (std::size_t i = 0; i < b.cell_counts.size(); ++i) out.cell_counts[i] += b.cell_counts[i];
  }
  return out;
}

WindowAccumulator::WindowAccumulator(double length, int batch_count, bool integral_boundaries) {
  if (!(length > 0.0) || batch_count < 1) {
    throw ModelError(ErrorCode::InvalidArgument, "window needs positive length and >= 1 batch");
  }
  auto count = static_cast<std::size_t>(batch_count);
  if (integral_boundaries) count = std::min(count, static_cast<std::size_t>(length));
  bounds_.resize(count + 1);
  for (std::size_t b = 0; b <= count; ++b) {
    double edge = length * static_cast<double>(b) / static_cast<double>(count);
    bounds_[b] = integral_boundaries ? std::floor(edge) : edge;
  }
  bounds_.back() = length;
  batches_.resize(count);
  for (std::size_t b = 0; b < count; ++b) batches_[b].length = bounds_[b + 1] - bounds_[b];
}

std::size_t WindowAccumulator::batch_of(double t) const noexcept {
  auto it = std::upper_bound(bounds_.begin(), bounds_.end(), t);
  auto idx = static_cast<std::size_t>(std::distance(bounds_.begin(), it));
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, batches_.size() - 1);
}

void WindowAccumulator::add_segment(double t0, double t1, double velocity, bool clockwise) {
  if (!(t1 > t0)) return;
  // Segments arrive in time order, so the cursor only moves forward.
  while (cursor_ + 1 < batches_.size() && t0 >= bounds_[cursor_ + 1]) ++cursor_;
  double start = t0;
  std::size_t b = cursor_;
  while (start < t1) {
    double stop = (b + 1 < batches_.size()) ? std::min(t1, bounds_[b + 1]) : t1;
    double dt = stop - start;
    batches_[b].displacement += velocity * dt;
    if (clockwise) batches_[b].clockwise_time += dt;
    start = stop;
    if (start < t1) ++b;
  }
  displacement_ += velocity * (t1 - t0);
  if (clockwise) clockwise_time_ += t1 - t0;
}

void WindowAccumulator::add_jump(double t) {
  batches_[batch_of(t)].jumps += 1.0;
  ++jumps_;
}

}  // namespace relay
