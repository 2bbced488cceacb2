#pragma once

#include <cstdint>
#include <optional>

#include "relay/error.hpp"

namespace relay {

/// Direction of travel on the circle. Clockwise is the positive orientation.
enum class Direction : std::int8_t { Clockwise = 1, CounterClockwise = -1 };

constexpr int sign(Direction d) noexcept { return static_cast<int>(d); }
constexpr Direction reversed(Direction d) noexcept {
  return d == Direction::Clockwise ? Direction::CounterClockwise : Direction::Clockwise;
}
constexpr Direction direction_from_sign(int s) noexcept {
  return s >= 0 ? Direction::Clockwise : Direction::CounterClockwise;
}

/// Lattice model: m walkers on the odd N-cycle, each reversing with
/// probability epsilon after every step.
struct DiscreteConfig {
  std::int64_t N = 5;
  int m = 2;
  double epsilon = 0.3;
};

/// Continuous model: m walkers on a circle of circumference N moving at speed
/// v and reversing at the jump times of independent rate-r Poisson clocks.
struct ContinuousConfig {
  double N = 1.0;
  double v = 1.0;
  double r = 1.0;
  int m = 2;
};

/// Identifies one replica's random streams. Equal (master, replica) pairs
/// give bit-identical trajectories.
struct SeedSpec {
  std::uint64_t master = 0;
  std::uint64_t replica = 0;
};

std::optional<ErrorCode> discrete_config_error(const DiscreteConfig& config) noexcept;
std::optional<ErrorCode> continuous_config_error(const ContinuousConfig& config) noexcept;

/// Returns the config unchanged or throws ModelError with the first failing
/// invariant.
const DiscreteConfig& validate_discrete(const DiscreteConfig& config);
const ContinuousConfig& validate_continuous(const ContinuousConfig& config);

/// (x1 - x2) reduced to [0, N).
double circle_delta(double x1, double x2, double N) noexcept;
std::int64_t circle_delta(std::int64_t x1, std::int64_t x2, std::int64_t N) noexcept;

/// Reduces an arbitrary real to [0, N).
double wrap_position(double x, double N) noexcept;
std::int64_t wrap_position(std::int64_t x, std::int64_t N) noexcept;

}  // namespace relay
