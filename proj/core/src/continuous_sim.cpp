#include "relay/continuous_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

namespace relay {

namespace {

bool coincident(double x1, double x2, double N) {
  const double delta = circle_delta(x1, x2, N);
  const double tol = kCoincidenceTolerance * N;
  return delta <= tol || delta >= N - tol;
}

double draw_switch(const ContinuousConfig& config, Engine& engine) {
  return std::exponential_distribution<double>(config.r)(engine);
}

void move_all(ContinuousState& state, const ContinuousConfig& config, double t) {
  const double dt = t - state.clock;
  if (dt > 0.0) {
    for (std::size_t j = 0; j < state.positions.size(); ++j) {
      state.positions[j] =
          wrap_position(state.positions[j] + config.v * sign(state.directions[j]) * dt, config.N);
    }
  }
  state.clock = t;
}

bool before(const Event& a, const Event& b) {
  return std::tie(a.time, a.kind, a.first, a.second) < std::tie(b.time, b.kind, b.first, b.second);
}

// Index of a walker sharing the carrier's position and moving the other way.
std::size_t regeneration_partner(const ContinuousState& state, double N) {
  const auto c = state.carrier;
  for (std::size_t j = 0; j < state.positions.size(); ++j) {
    if (j != c && state.directions[j] != state.directions[c] &&
        coincident(state.positions[j], state.positions[c], N)) {
      return j;
    }
  }
  return c;
}

bool resolve_continuous_handoff(ContinuousState& state, const ContinuousConfig& config,
                                Engine& tie_break, Direction target) {
  const auto c = state.carrier;
  if (state.directions[c] == target) return false;
  thread_local std::vector<std::size_t> candidates;
  candidates.clear();
  for (std::size_t j = 0; j < state.positions.size(); ++j) {
    if (j != c && state.directions[j] == target &&
        coincident(state.positions[j], state.positions[c], config.N)) {
      candidates.push_back(j);
    }
  }
  if (candidates.empty()) return false;
  state.carrier = candidates.size() == 1 ? candidates.front()
                                         : candidates[uniform_index(tie_break, candidates.size())];
  return true;
}

void check_continuous_start(const ContinuousStart& start, const ContinuousConfig& config) {
  const auto m = static_cast<std::size_t>(config.m);
  if (start.positions.size() != m || start.directions.size() != m || start.carrier >= m) {
    throw ModelError(ErrorCode::InvalidState, "initial state does not match m");
  }
  for (double x : start.positions) {
    if (!(x >= 0.0 && x < config.N)) {
      throw ModelError(ErrorCode::InvalidState, "position " + std::to_string(x) + " outside [0, N)");
    }
  }
}

}  // namespace

std::optional<double> meeting_time(double delta, Direction d1, Direction d2, double v, double N) {
  const int closing = sign(d1) - sign(d2);
  if (closing == 0) return std::nullopt;
  const double tol = kCoincidenceTolerance * N;
  if (delta <= tol || delta >= N - tol) return N / (2.0 * v);
  if (closing > 0) return (N - delta) / (2.0 * v);
  return delta / (2.0 * v);
}

Event next_event(const ContinuousState& state, const ContinuousConfig& config) {
  Event best{std::numeric_limits<double>::infinity(), EventKind::Meeting,
             std::numeric_limits<std::size_t>::max(), std::numeric_limits<std::size_t>::max()};
  const auto m = state.positions.size();
  for (std::size_t j = 0; j < m; ++j) {
    Event e{state.next_switch[j], EventKind::Switch, j, j};
    if (before(e, best)) best = e;
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) {
      const double delta = circle_delta(state.positions[j], state.positions[k], config.N);
      auto dt = meeting_time(delta, state.directions[j], state.directions[k], config.v, config.N);
      if (!dt) continue;
      Event e{state.clock + *dt, EventKind::Meeting, j, k};
      if (before(e, best)) best = e;
    }
  }
  return best;
}

void advance_to(ContinuousState& state, const ContinuousConfig& config, double t) {
  if (t < state.clock) {
    throw ModelError(ErrorCode::InvalidArgument, "cannot advance backwards in time");
  }
  const Event pending = next_event(state, config);
  if (pending.time < t) {
    throw ModelError(ErrorCode::EventSkipped,
                     "event at " + std::to_string(pending.time) + " precedes " + std::to_string(t));
  }
  move_all(state, config, t);
}

bool handle_event(ContinuousState& state, const Event& event, const ContinuousConfig& config,
                  ReplicaStreams& streams, Direction target) {
  move_all(state, config, event.time);
  if (event.kind == EventKind::Switch) {
    const auto j = event.first;
    state.directions[j] = reversed(state.directions[j]);
    state.next_switch[j] = state.clock + draw_switch(config, streams.walker(j));
    return false;
  }
  // Snap the pair together so the next gap computation sees an exact zero.
  state.positions[event.second] = state.positions[event.first];
  if (state.carrier != event.first && state.carrier != event.second) return false;
  return resolve_continuous_handoff(state, config, streams.control(), target);
}

ContinuousState sample_f_state(const ContinuousConfig& config, ReplicaStreams& streams) {
  validate_continuous(config);
  if (config.m != 2) throw ModelError(ErrorCode::MNotTwo, "F-start is defined for two walkers");
  Engine& control = streams.control();
  const double x = wrap_position(config.N * uniform01(control), config.N);
  ContinuousState s;
  s.positions = {x, x};
  if (uniform01(control) < 0.5) {
    s.directions = {Direction::Clockwise, Direction::CounterClockwise};
    s.carrier = 0;
  } else {
    s.directions = {Direction::CounterClockwise, Direction::Clockwise};
    s.carrier = 1;
  }
  s.next_switch = {draw_switch(config, streams.walker(0)), draw_switch(config, streams.walker(1))};
  return s;
}

ContinuousState sample_uniform_continuous(const ContinuousConfig& config, ReplicaStreams& streams,
                                          Direction target) {
  validate_continuous(config);
  const auto m = static_cast<std::size_t>(config.m);
  Engine& control = streams.control();
  ContinuousState s;
  s.positions.resize(m);
  s.directions.resize(m);
  s.next_switch.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    s.positions[j] = wrap_position(config.N * uniform01(control), config.N);
    s.directions[j] = uniform01(control) < 0.5 ? Direction::Clockwise : Direction::CounterClockwise;
    s.next_switch[j] = draw_switch(config, streams.walker(j));
  }
  s.carrier = uniform_index(control, m);
  resolve_continuous_handoff(s, config, control, target);
  return s;
}

int default_position_bins(const ContinuousConfig& config) {
  return std::max(8, static_cast<int>(std::ceil(config.N)));
}

std::size_t continuous_cell_count(const ContinuousConfig& config, int bins) {
  std::size_t cells = 1;
  for (int j = 0; j < config.m; ++j) cells *= static_cast<std::size_t>(2 * bins);
  return cells;
}

RunReport simulate_continuous(const ContinuousConfig& config, const ContinuousRunOptions& options,
                              const SeedSpec& seed) {
  validate_continuous(config);
  if (!(options.horizon > 0.0)) throw ModelError(ErrorCode::InvalidArgument, "horizon must be > 0");

  ReplicaStreams streams(seed, config.m);
  const Direction target = options.target;
  const double N = config.N;
  const double v = config.v;

  ContinuousState state;
  bool regeneration_start = false;
  if (std::holds_alternative<RegenerationStart>(options.initial)) {
    state = sample_f_state(config, streams);
    regeneration_start = true;
  } else if (std::holds_alternative<UniformStart>(options.initial)) {
    state = sample_uniform_continuous(config, streams, target);
  } else {
    const auto& start = std::get<ContinuousStart>(options.initial);
    check_continuous_start(start, config);
    state.positions = start.positions;
    state.directions = start.directions;
    state.carrier = start.carrier;
    state.next_switch.resize(state.positions.size());
    for (std::size_t j = 0; j < state.positions.size(); ++j) {
      state.next_switch[j] = draw_switch(config, streams.walker(j));
    }
    resolve_continuous_handoff(state, config, streams.control(), target);
  }

  if (!regeneration_start) {
    const double burn = options.burn_in_fraction * options.horizon;
    while (true) {
      const Event e = next_event(state, config);
      if (e.time > burn) break;
      handle_event(state, e, config, streams, target);
    }
    move_all(state, config, burn);
  }

  // Measurement window [origin, origin + horizon), reported in window time.
  const double origin = state.clock;
  const double horizon = options.horizon;

  RunReport report;
  report.model = ModelKind::Continuous;
  report.max_speed = v;
  report.cycle_span = N;
  const int bins = options.position_bins > 0 ? options.position_bins : default_position_bins(config);
  if (options.uniformity_gap > 0.0) report.cell_counts.assign(continuous_cell_count(config, bins), 0);

  WindowAccumulator window(horizon, options.batch_count, false);

  bool cycle_open = false;
  CycleRecord cycle;
  double cycle_start = 0.0;
  std::size_t cycle_carrier = 0;
  std::size_t cycle_partner = 0;
  auto open_cycle = [&](double t) {
    cycle_open = true;
    cycle = CycleRecord{};
    cycle_start = t;
    cycle_carrier = state.carrier;
    cycle_partner = regeneration_partner(state, N);
  };
  if (options.record_cycles && regeneration_partner(state, N) != state.carrier) open_cycle(0.0);

  double next_sample = 0.0;
  double next_trace = options.trace_every;

  auto record_samples = [&](double a, double b) {
    // Histogram the configuration at each sample time in [a, b).
    while (options.uniformity_gap > 0.0 && next_sample < b) {
      const double dt = next_sample - a;
      std::size_t index = 0;
      const auto radix = static_cast<std::size_t>(2 * bins);
      for (std::size_t j = state.positions.size(); j-- > 0;) {
        const double x = wrap_position(state.positions[j] + v * sign(state.directions[j]) * dt, N);
        auto bin = static_cast<std::size_t>(x / N * bins);
        bin = std::min(bin, static_cast<std::size_t>(bins - 1));
        index = index * radix + bin * 2 + (state.directions[j] == Direction::Clockwise ? 1 : 0);
      }
      ++report.cell_counts[index];
      next_sample += options.uniformity_gap;
    }
  };

  while (true) {
    const Event e = next_event(state, config);
    const double a = state.clock - origin;
    const double b = std::min(e.time - origin, horizon);
    const int heading = sign(state.directions[state.carrier]);

    record_samples(a, b);
    window.add_segment(a, b, v * heading, heading > 0);
    if (cycle_open) {
      cycle.displacement += v * heading * (b - a);
      cycle.relative_displacement +=
          v * (sign(state.directions[cycle_carrier]) - sign(state.directions[cycle_partner])) * (b - a);
    }
    while (options.trace_every > 0.0 && next_trace <= b) {
      const double disp_at = window.displacement() - v * heading * (b - next_trace);
      report.running_trace.push_back(
          {next_trace, disp_at / next_trace, static_cast<double>(window.jumps()) / next_trace});
      next_trace += options.trace_every;
    }

    if (e.time - origin >= horizon) {
      move_all(state, config, origin + horizon);
      break;
    }

    const bool jumped = handle_event(state, e, config, streams, target);
    if (e.kind == EventKind::Meeting) ++report.meeting_count;
    if (jumped) {
      window.add_jump(b);
      if (cycle_open) ++cycle.jumps;
    }
    if (options.record_cycles && e.kind == EventKind::Meeting &&
        (e.first == state.carrier || e.second == state.carrier) &&
        regeneration_partner(state, N) != state.carrier) {
      if (cycle_open) {
        cycle.length = b - cycle_start;
        report.cycles.push_back(cycle);
      }
      open_cycle(b);
    }
  }

  report.total_time = horizon;
  report.displacement_sum = window.displacement();
  report.jump_count = window.jumps();
  report.clockwise_time = window.clockwise_time();
  report.batches = window.batches();
  return report;
}

}  // namespace relay
