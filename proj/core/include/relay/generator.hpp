#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "relay/model.hpp"

namespace relay::generator {

/// A point (x, d, i) of the continuous state space.
struct GeneratorPoint {
  std::vector<double> positions;
  std::vector<Direction> directions;
  std::size_t carrier = 0;
};

/// A function on the state space together with its partial derivatives in
/// the position coordinates. Leave `partial` empty to fall back to central
/// differences with step 1e-6 * N.
struct DifferentiableFunction {
  std::function<double(const GeneratorPoint&)> value;
  std::function<double(const GeneratorPoint&, std::size_t)> partial;
};

/// (Lf)(x, d, i) = sum_j v d(j) df/dx(j) + r [f(x, sigma^j d, i) - f(x, d, i)].
double apply_generator(const DifferentiableFunction& f, const GeneratorPoint& point,
                       const ContinuousConfig& config);

/// Two-walker state described by its gap delta = x1 - x2 mod N.
struct Phi2State {
  double delta = 0.0;
  Direction d1 = Direction::Clockwise;
  Direction d2 = Direction::Clockwise;
  std::size_t carrier = 0;
};

/// Co-located and heading in opposite directions.
bool in_F(const Phi2State& state, const ContinuousConfig& config);

/// Solution of LH = -1 off F, with H = -N/(2v) on F:
///   ((N - 2 delta) / (4v)) (d1 - d2) + (1 + d1 d2) / (4r) + r delta (N - delta) / (2v^2).
double H_value(const Phi2State& state, const ContinuousConfig& config);
/// dH/d(delta) off F.
double H_slope(const Phi2State& state, const ContinuousConfig& config);

/// Mean time to the next visit of F: H + N/(2v) off F, N/v on F.
double expected_return_time(const Phi2State& state, const ContinuousConfig& config);

/// Harmonic function off F giving the probability that the walkers next meet
/// after going around the circle: (r delta + v [1 + (d1 - d2)/2]) / (rN + 2v).
/// Throws StateInF on F.
double V_value(const Phi2State& state, const ContinuousConfig& config);
double V_slope(const ContinuousConfig& config);

/// lim V as delta decreases to 0 with directions (+1, -1): 2v / (2v + rN).
double escape_probability_from_F(const ContinuousConfig& config);

Phi2State reduce(const GeneratorPoint& point, const ContinuousConfig& config);

/// H and V lifted to functions of (x1, x2, d1, d2, i) with analytic partials.
DifferentiableFunction h_function(const ContinuousConfig& config);
DifferentiableFunction v_function(const ContinuousConfig& config);

}  // namespace relay::generator
