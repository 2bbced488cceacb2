#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "relay/model.hpp"

namespace relay::exact {

/// State (y, d1, d2, i) of the two-walker chain reduced to the gap
/// y = X(1) - X(2) mod N. `carrier` is 0 or 1.
struct ReducedState {
  std::int64_t y = 0;
  Direction d1 = Direction::Clockwise;
  Direction d2 = Direction::Clockwise;
  int carrier = 0;

  bool operator==(const ReducedState&) const = default;
};

struct Transition {
  std::size_t to = 0;
  double probability = 0.0;
  /// True when the carrier changes on this transition.
  bool jump = false;
};

/// The 8N - 2 state reduced chain with its sparse transition rows.
class ReducedChain {
 public:
  static ReducedChain build(std::int64_t N, double epsilon);

  [[nodiscard]] std::int64_t N() const noexcept { return N_; }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
  [[nodiscard]] const ReducedState& state(std::size_t index) const { return states_.at(index); }
  [[nodiscard]] std::optional<std::size_t> index_of(const ReducedState& s) const;
  [[nodiscard]] const std::vector<Transition>& row(std::size_t index) const { return rows_.at(index); }
  [[nodiscard]] double probability(std::size_t from, std::size_t to) const;
  [[nodiscard]] double jump_probability(std::size_t from) const;

 private:
  std::size_t slot(const ReducedState& s) const;

  std::int64_t N_ = 0;
  double epsilon_ = 0.0;
  std::vector<ReducedState> states_;
  std::vector<std::vector<Transition>> rows_;
  std::vector<std::ptrdiff_t> slot_to_index_;
};

enum class StationaryMethod { Auto, DenseLU, SparseLU, PowerIteration };

/// Invariant distribution of the chain. Auto uses a dense LU solve up to
/// N = 200 and a sparse LU above. Throws SolverSingular when the residual
/// max |pi P - pi| exceeds 1e-9.
std::vector<double> stationary(const ReducedChain& chain,
                               StationaryMethod method = StationaryMethod::Auto);
double stationary_residual(const ReducedChain& chain, const std::vector<double>& pi);

struct ExactValues {
  double speed = 0.0;
  double cost = 0.0;
  double direction_prob = 0.0;
};

/// Speed, cost and clockwise probability from one stationary solve.
ExactValues exact_values(std::int64_t N, double epsilon,
                         StationaryMethod method = StationaryMethod::Auto);
double exact_speed(std::int64_t N, double epsilon);
double exact_cost(std::int64_t N, double epsilon);

/// Solution of the two-term boundary value recursion
///   f(k) = (1 - eps) f(k+1) + eps g(k),
///   g(k+1) = (1 - eps) g(k) + eps f(k+1),  g(0) = 0, f(N-1) = 1,
/// where f(k) and g(k) are the probabilities of going around from gap 2k
/// heading apart and from gap 2k+2 heading together.
struct TraceSolution {
  double A = 0.0;
  /// f(0), ..., f(N-1).
  std::vector<double> f;
  /// g(-1), ..., g(N-2); use g_at(k).
  std::vector<double> g;

  [[nodiscard]] double g_at(std::int64_t k) const { return g.at(static_cast<std::size_t>(k + 1)); }
};

/// Solves the recursion by shooting on the unknown A = f(0).
TraceSolution solve_trace_bvp(std::int64_t N, double epsilon);

/// P(gap reaches 2N before returning to 0) from (0, +1, -1), by solving the
/// absorption system of the 2(N + 1)-state trace chain directly.
double hitting_prob_oracle(std::int64_t N, double epsilon);

}  // namespace relay::exact
