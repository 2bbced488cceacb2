#include "relay/discrete_sim.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace relay {

namespace {

// Walkers eligible to take the message from the carrier.
std::size_t collect_candidates(const DiscreteState& state, Direction target,
                               std::vector<std::size_t>& out) {
  out.clear();
  const auto c = state.carrier;
  if (state.directions[c] == target) return 0;
  for (std::size_t j = 0; j < state.positions.size(); ++j) {
    if (j != c && state.positions[j] == state.positions[c] && state.directions[j] == target) {
      out.push_back(j);
    }
  }
  return out.size();
}

std::size_t regeneration_partner(const DiscreteState& state) {
  const auto c = state.carrier;
  for (std::size_t j = 0; j < state.positions.size(); ++j) {
    if (j != c && state.positions[j] == state.positions[c] &&
        state.directions[j] != state.directions[c]) {
      return j;
    }
  }
  return c;
}

}  // namespace

void check_state(const DiscreteState& state, const DiscreteConfig& config) {
  const auto m = static_cast<std::size_t>(config.m);
  if (state.positions.size() != m || state.directions.size() != m) {
    throw ModelError(ErrorCode::InvalidState, "state size does not match m");
  }
  if (state.carrier >= m) throw ModelError(ErrorCode::InvalidState, "carrier index out of range");
  for (auto x : state.positions) {
    if (x < 0 || x >= config.N) throw ModelError(ErrorCode::InvalidState, "position out of range");
  }
}

bool is_excluded(const DiscreteState& state, Direction target) {
  thread_local std::vector<std::size_t> scratch;
  return collect_candidates(state, target, scratch) > 0;
}

bool in_regeneration_set(const DiscreteState& state) {
  return regeneration_partner(state) != state.carrier;
}

bool resolve_handoff(DiscreteState& state, Engine& tie_break, Direction target) {
  thread_local std::vector<std::size_t> candidates;
  const auto n = collect_candidates(state, target, candidates);
  if (n == 0) return false;
  state.carrier = n == 1 ? candidates.front() : candidates[uniform_index(tie_break, n)];
  return true;
}

bool apply_step(DiscreteState& state, const DiscreteConfig& config, std::span<const bool> flips,
                Engine& tie_break, Direction target) {
  for (std::size_t j = 0; j < state.positions.size(); ++j) {
    state.positions[j] = wrap_position(state.positions[j] + sign(state.directions[j]), config.N);
    if (flips[j]) state.directions[j] = reversed(state.directions[j]);
  }
  ++state.t;
  return resolve_handoff(state, tie_break, target);
}

bool step(DiscreteState& state, const DiscreteConfig& config, ReplicaStreams& streams,
          Direction target) {
  thread_local std::unique_ptr<bool[]> flips;
  thread_local std::size_t capacity = 0;
  const auto m = state.positions.size();
  if (capacity < m) {
    flips = std::make_unique<bool[]>(m);
    capacity = m;
  }
  std::bernoulli_distribution flip(config.epsilon);
  for (std::size_t j = 0; j < m; ++j) flips[j] = flip(streams.walker(j));
  return apply_step(state, config, std::span<const bool>(flips.get(), m), streams.control(), target);
}

DiscreteState sample_nu(const DiscreteConfig& config, Engine& engine) {
  validate_discrete(config);
  if (config.m != 2) throw ModelError(ErrorCode::MNotTwo, "nu is defined for two walkers");
  const auto site = static_cast<std::int64_t>(uniform_index(engine, static_cast<std::size_t>(config.N)));
  DiscreteState s;
  s.positions = {site, site};
  if (uniform01(engine) < 0.5) {
    s.directions = {Direction::Clockwise, Direction::CounterClockwise};
    s.carrier = 0;
  } else {
    s.directions = {Direction::CounterClockwise, Direction::Clockwise};
    s.carrier = 1;
  }
  return s;
}

DiscreteState sample_uniform_state(const DiscreteConfig& config, Engine& engine, Direction target) {
  validate_discrete(config);
  const auto m = static_cast<std::size_t>(config.m);
  DiscreteState s;
  s.positions.resize(m);
  s.directions.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    s.positions[j] = static_cast<std::int64_t>(uniform_index(engine, static_cast<std::size_t>(config.N)));
    s.directions[j] = uniform01(engine) < 0.5 ? Direction::Clockwise : Direction::CounterClockwise;
  }
  s.carrier = uniform_index(engine, m);
  resolve_handoff(s, engine, target);
  return s;
}

std::size_t discrete_cell_count(const DiscreteConfig& config) {
  std::size_t cells = 1;
  for (int j = 0; j < config.m; ++j) cells *= static_cast<std::size_t>(2 * config.N);
  return cells;
}

std::size_t discrete_cell_index(const DiscreteState& state, const DiscreteConfig& config) {
  std::size_t index = 0;
  const auto radix = static_cast<std::size_t>(2 * config.N);
  for (std::size_t j = state.positions.size(); j-- > 0;) {
    auto cell = static_cast<std::size_t>(state.positions[j]) * 2 +
                (state.directions[j] == Direction::Clockwise ? 1 : 0);
    index = index * radix + cell;
  }
  return index;
}

RunReport simulate_discrete(const DiscreteConfig& config, const DiscreteRunOptions& options,
                            const SeedSpec& seed) {
  validate_discrete(config);
  if (options.steps < 1) throw ModelError(ErrorCode::InvalidArgument, "steps must be >= 1");

  ReplicaStreams streams(seed, config.m);
  const Direction target = options.target;

  DiscreteState state;
  bool regeneration_start = false;
  if (std::holds_alternative<RegenerationStart>(options.initial)) {
    state = sample_nu(config, streams.control());
    regeneration_start = true;
  } else if (std::holds_alternative<UniformStart>(options.initial)) {
    state = sample_uniform_state(config, streams.control(), target);
  } else {
    state = std::get<DiscreteState>(options.initial);
    check_state(state, config);
    resolve_handoff(state, streams.control(), target);
  }

  if (!regeneration_start) {
    const auto burn = static_cast<std::int64_t>(
        std::ceil(options.burn_in_fraction * static_cast<double>(options.steps)));
    for (std::int64_t k = 0; k < burn; ++k) step(state, config, streams, target);
  }

  RunReport report;
  report.model = ModelKind::Discrete;
  report.max_speed = 1.0;
  report.cycle_span = 2.0 * static_cast<double>(config.N);
  if (options.uniformity_gap > 0) report.cell_counts.assign(discrete_cell_count(config), 0);

  WindowAccumulator window(static_cast<double>(options.steps), options.batch_count, true);

  bool cycle_open = false;
  CycleRecord cycle;
  std::int64_t cycle_start = 0;
  std::size_t cycle_carrier = 0;
  std::size_t cycle_partner = 0;
  auto open_cycle = [&](std::int64_t k) {
    cycle_open = true;
    cycle = CycleRecord{};
    cycle_start = k;
    cycle_carrier = state.carrier;
    cycle_partner = regeneration_partner(state);
  };
  if (options.record_cycles && in_regeneration_set(state)) open_cycle(0);

  for (std::int64_t k = 0; k < options.steps; ++k) {
    if (options.uniformity_gap > 0 && k % options.uniformity_gap == 0) {
      ++report.cell_counts[discrete_cell_index(state, config)];
    }
    const int heading = sign(state.directions[state.carrier]);
    const auto slot = static_cast<double>(k);
    window.add_segment(slot, slot + 1.0, heading, heading > 0);
    if (cycle_open) {
      cycle.displacement += heading;
      cycle.relative_displacement +=
          sign(state.directions[cycle_carrier]) - sign(state.directions[cycle_partner]);
    }

    const bool jumped = step(state, config, streams, target);
    if (jumped) {
      window.add_jump(slot);
      if (cycle_open) ++cycle.jumps;
    }

    if (options.record_cycles && in_regeneration_set(state)) {
      if (cycle_open) {
        cycle.length = static_cast<double>(k + 1 - cycle_start);
        report.cycles.push_back(cycle);
      }
      open_cycle(k + 1);
    }

    if (options.trace_every > 0 && (k + 1) % options.trace_every == 0) {
      const double elapsed = static_cast<double>(k + 1);
      report.running_trace.push_back(
          {elapsed, window.displacement() / elapsed, static_cast<double>(window.jumps()) / elapsed});
    }
  }

  report.total_time = static_cast<double>(options.steps);
  report.displacement_sum = window.displacement();
  report.jump_count = window.jumps();
  report.clockwise_time = window.clockwise_time();
  report.batches = window.batches();
  return report;
}

}  // namespace relay
