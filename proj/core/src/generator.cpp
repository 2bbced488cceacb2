#include "relay/generator.hpp"

#include "relay/continuous_sim.hpp"

namespace relay::generator {

namespace {

double finite_difference(const DifferentiableFunction& f, const GeneratorPoint& point,
                         std::size_t j, double N) {
  const double h = 1e-6 * N;
  GeneratorPoint shifted = point;
  shifted.positions[j] = wrap_position(point.positions[j] + h, N);
  const double up = f.value(shifted);
  shifted.positions[j] = wrap_position(point.positions[j] - h, N);
  const double down = f.value(shifted);
  return (up - down) / (2.0 * h);
}

void require_two(const GeneratorPoint& point) {
  if (point.positions.size() != 2 || point.directions.size() != 2) {
    throw ModelError(ErrorCode::MNotTwo, "H and V are defined for two walkers");
  }
}

}  // namespace

double apply_generator(const DifferentiableFunction& f, const GeneratorPoint& point,
                       const ContinuousConfig& config) {
  const double base = f.value(point);
  double total = 0.0;
  GeneratorPoint flipped = point;
  for (std::size_t j = 0; j < point.positions.size(); ++j) {
    const double slope = f.partial ? f.partial(point, j) : finite_difference(f, point, j, config.N);
    total += config.v * sign(point.directions[j]) * slope;
    flipped.directions[j] = reversed(point.directions[j]);
    total += config.r * (f.value(flipped) - base);
    flipped.directions[j] = point.directions[j];
  }
  return total;
}

bool in_F(const Phi2State& state, const ContinuousConfig& config) {
  const double tol = kCoincidenceTolerance * config.N;
  const bool together = state.delta <= tol || state.delta >= config.N - tol;
  return together && state.d1 != state.d2;
}

double H_value(const Phi2State& state, const ContinuousConfig& config) {
  const double N = config.N, v = config.v, r = config.r;
  if (in_F(state, config)) return -N / (2.0 * v);
  const double delta = state.delta;
  const int d1 = sign(state.d1), d2 = sign(state.d2);
  return ((N - 2.0 * delta) / (4.0 * v)) * (d1 - d2) + (1.0 + d1 * d2) / (4.0 * r) +
         r * delta * (N - delta) / (2.0 * v * v);
}

double H_slope(const Phi2State& state, const ContinuousConfig& config) {
  const double N = config.N, v = config.v, r = config.r;
  const int d1 = sign(state.d1), d2 = sign(state.d2);
  return -(d1 - d2) / (2.0 * v) + r * (N - 2.0 * state.delta) / (2.0 * v * v);
}

double expected_return_time(const Phi2State& state, const ContinuousConfig& config) {
  if (in_F(state, config)) return config.N / config.v;
  return H_value(state, config) + config.N / (2.0 * config.v);
}

double V_value(const Phi2State& state, const ContinuousConfig& config) {
  if (in_F(state, config)) throw ModelError(ErrorCode::StateInF, "V is defined off F");
  const double N = config.N, v = config.v, r = config.r;
  const int d1 = sign(state.d1), d2 = sign(state.d2);
  return (r * state.delta + v * (1.0 + (d1 - d2) / 2.0)) / (r * N + 2.0 * v);
}

double V_slope(const ContinuousConfig& config) {
  return config.r / (config.r * config.N + 2.0 * config.v);
}

double escape_probability_from_F(const ContinuousConfig& config) {
  return 2.0 * config.v / (2.0 * config.v + config.r * config.N);
}

Phi2State reduce(const GeneratorPoint& point, const ContinuousConfig& config) {
  require_two(point);
  return {circle_delta(point.positions[0], point.positions[1], config.N), point.directions[0],
          point.directions[1], point.carrier};
}

DifferentiableFunction h_function(const ContinuousConfig& config) {
  DifferentiableFunction f;
  f.value = [config](const GeneratorPoint& p) { return H_value(reduce(p, config), config); };
  // delta = x1 - x2, so d/dx1 = d/d(delta) and d/dx2 = -d/d(delta).
  f.partial = [config](const GeneratorPoint& p, std::size_t j) {
    const double slope = H_slope(reduce(p, config), config);
    return j == 0 ? slope : -slope;
  };
  return f;
}

DifferentiableFunction v_function(const ContinuousConfig& config) {
  DifferentiableFunction f;
  f.value = [config](const GeneratorPoint& p) { return V_value(reduce(p, config), config); };
  f.partial = [config](const GeneratorPoint&, std::size_t j) {
    return j == 0 ? V_slope(config) : -V_slope(config);
  };
  return f;
}

}  // namespace relay::generator
