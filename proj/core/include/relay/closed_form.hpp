#pragma once

#include <cstdint>

namespace relay::closed_form {

// Long-run message statistics for two walkers. Inputs are validated with the
// same rules as DiscreteConfig / ContinuousConfig; boundary parameters
// (epsilon in {0, 1}, r = 0) are rejected rather than extrapolated.

/// (1 - eps) / (2 (1 + eps (N - 2))). Tends to 1/2 as eps -> 0.
double speed_discrete(std::int64_t N, double epsilon);
/// eps * speed_discrete(N, eps).
double cost_discrete(std::int64_t N, double epsilon);
/// Stationary probability that the message moves clockwise: (s + 1) / 2.
double direction_prob_discrete(std::int64_t N, double epsilon);

/// v^2 / (2v + rN).
double speed_continuous(double N, double v, double r);
/// rv / (2v + rN).
double cost_continuous(double N, double v, double r);
/// (3v + rN) / (2 (2v + rN)).
double direction_prob_continuous(double N, double v, double r);

/// Speed and cost in units of v and r: f(alpha) = g(alpha) = 1 / (2 + alpha),
/// alpha = rN / v.
struct Dimensionless {
  double f = 0.0;
  double g = 0.0;
};
Dimensionless dimensionless(double alpha);
double alpha(double N, double v, double r);

/// Relative gap between the lattice model with eps = N_c r / (2N) and the
/// continuous model on a circle of circumference N_c at unit speed.
struct ScalingError {
  double epsilon = 0.0;
  double speed = 0.0;
  double cost = 0.0;
};
ScalingError scaling_limit_error(std::int64_t N, double r, double N_c);

}  // namespace relay::closed_form
