#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "relay/discrete_sim.hpp"
#include "relay/model.hpp"
#include "relay/random.hpp"
#include "relay/run_report.hpp"

namespace relay {

/// Configuration of the continuous model at time `clock`, together with
/// each walker's pending reversal time.
struct ContinuousState {
  std::vector<double> positions;
  std::vector<Direction> directions;
  std::size_t carrier = 0;
  double clock = 0.0;
  std::vector<double> next_switch;
};

enum class EventKind { Switch = 0, Meeting = 1 };

/// Switch: walker `first` reverses. Meeting: walkers `first` < `second`
/// coincide.
struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Switch;
  std::size_t first = 0;
  std::size_t second = 0;

  bool operator==(const Event&) const = default;
};

/// Gaps within this fraction of N of 0 (or of N) count as coincident.
inline constexpr double kCoincidenceTolerance = 1e-12;

/// Time until the gap delta = x1 - x2 (mod N) next returns to 0 when the
/// walkers head d1 and d2 at speed v; nullopt if they move in parallel.
/// Coincident walkers heading apart meet again after N / (2v).
std::optional<double> meeting_time(double delta, Direction d1, Direction d2, double v, double N);

/// Earliest pending event. Ties go to switches before meetings, then to the
/// lowest walker (pair) index.
Event next_event(const ContinuousState& state, const ContinuousConfig& config);

/// Linear motion up to time t. Throws EventSkipped if an event falls strictly
/// inside (clock, t).
void advance_to(ContinuousState& state, const ContinuousConfig& config, double t);

/// Processes `event` (advancing to its time first). Returns true if the
/// message changed hands.
bool handle_event(ContinuousState& state, const Event& event, const ContinuousConfig& config,
                  ReplicaStreams& streams, Direction target = Direction::Clockwise);

/// Two walkers at a common uniform position with opposite directions, the
/// clockwise one carrying; fresh switch clocks. Requires m = 2.
ContinuousState sample_f_state(const ContinuousConfig& config, ReplicaStreams& streams);

/// Uniform positions, directions and carrier with fresh switch clocks.
ContinuousState sample_uniform_continuous(const ContinuousConfig& config, ReplicaStreams& streams,
                                          Direction target = Direction::Clockwise);

/// Explicit start: positions, directions and carrier are taken as given,
/// clock and switch times are (re)drawn.
struct ContinuousStart {
  std::vector<double> positions;
  std::vector<Direction> directions;
  std::size_t carrier = 0;
};
using ContinuousInitial = std::variant<UniformStart, RegenerationStart, ContinuousStart>;

struct ContinuousRunOptions {
  double horizon = 1e6;
  ContinuousInitial initial = UniformStart{};
  int batch_count = 50;
  double burn_in_fraction = 0.01;
  /// Running-average point every this much time (0: off).
  double trace_every = 0.0;
  /// Histogram (X, D) every this much time (0: off).
  double uniformity_gap = 0.0;
  /// Position bins per walker for the histogram; 0 selects max(8, ceil(N)).
  int position_bins = 0;
  bool record_cycles = true;
  Direction target = Direction::Clockwise;
};

int default_position_bins(const ContinuousConfig& config);
std::size_t continuous_cell_count(const ContinuousConfig& config, int bins);

RunReport simulate_continuous(const ContinuousConfig& config, const ContinuousRunOptions& options,
                              const SeedSpec& seed);

}  // namespace relay
