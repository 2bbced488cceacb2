#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "relay/model.hpp"
#include "relay/random.hpp"
#include "relay/run_report.hpp"

namespace relay {

/// Configuration (X_t, D_t, I_t) of the lattice model at integer time t.
/// Walker indices are zero-based.
struct DiscreteState {
  std::vector<std::int64_t> positions;
  std::vector<Direction> directions;
  std::size_t carrier = 0;
  std::int64_t t = 0;

  bool operator==(const DiscreteState&) const = default;
};

/// Throws InvalidState unless sizes, ranges and the carrier index fit config.
void check_state(const DiscreteState& state, const DiscreteConfig& config);

/// True when the carrier moves against `target` while sharing its site with a
/// walker moving along `target`. Such states are resolved by a handoff.
bool is_excluded(const DiscreteState& state, Direction target = Direction::Clockwise);

/// True when the carrier shares its site with a walker moving the opposite
/// way (the regeneration set; for m = 2 this is Y = 0, D(1) != D(2)).
bool in_regeneration_set(const DiscreteState& state);

/// Applies the handoff rule to the current configuration. Among several
/// eligible walkers one is drawn uniformly from `tie_break`. Returns true if
/// the carrier changed.
bool resolve_handoff(DiscreteState& state, Engine& tie_break,
                     Direction target = Direction::Clockwise);

/// One transition with given flip outcomes: move every walker one site along
/// its direction, then reverse walker j iff flips[j], then hand off.
bool apply_step(DiscreteState& state, const DiscreteConfig& config, std::span<const bool> flips,
                Engine& tie_break, Direction target = Direction::Clockwise);

/// One transition with flips drawn from each walker's own stream.
bool step(DiscreteState& state, const DiscreteConfig& config, ReplicaStreams& streams,
          Direction target = Direction::Clockwise);

/// Draws from nu: both walkers on a uniformly chosen common site with
/// opposite directions and the clockwise walker carrying. Requires m = 2.
DiscreteState sample_nu(const DiscreteConfig& config, Engine& engine);

/// Uniform positions, directions and carrier, followed by a handoff if the
/// draw landed on an excluded configuration.
DiscreteState sample_uniform_state(const DiscreteConfig& config, Engine& engine,
                                   Direction target = Direction::Clockwise);

struct UniformStart {};
struct RegenerationStart {};
using DiscreteInitial = std::variant<UniformStart, RegenerationStart, DiscreteState>;

struct DiscreteRunOptions {
  std::int64_t steps = 1'000'000;
  DiscreteInitial initial = UniformStart{};
  int batch_count = 50;
  /// Extra steps discarded before measurement, as a fraction of `steps`.
  /// Ignored for RegenerationStart.
  double burn_in_fraction = 0.01;
  /// Record a running-average point every this many steps (0: off).
  std::int64_t trace_every = 0;
  /// Histogram (X, D) every this many steps (0: off).
  std::int64_t uniformity_gap = 0;
  bool record_cycles = true;
  /// Direction the message tries to follow. Counter-clockwise only exists to
  /// mutation-test the validation suite.
  Direction target = Direction::Clockwise;
};

/// Number of (X, D) cells used by the uniformity histogram: (2N)^m.
std::size_t discrete_cell_count(const DiscreteConfig& config);
std::size_t discrete_cell_index(const DiscreteState& state, const DiscreteConfig& config);

RunReport simulate_discrete(const DiscreteConfig& config, const DiscreteRunOptions& options,
                            const SeedSpec& seed);

}  // namespace relay
