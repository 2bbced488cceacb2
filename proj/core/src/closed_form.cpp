#include "relay/closed_form.hpp"

#include <cmath>
#include <string>

#include "relay/model.hpp"

namespace relay::closed_form {

namespace {

void check_discrete(std::int64_t N, double epsilon) { validate_discrete({N, 2, epsilon}); }
void check_continuous(double N, double v, double r) { validate_continuous({N, v, r, 2}); }

}  // namespace

double speed_discrete(std::int64_t N, double epsilon) {
  check_discrete(N, epsilon);
  return (1.0 - epsilon) / (2.0 * (1.0 + epsilon * static_cast<double>(N - 2)));
}

double cost_discrete(std::int64_t N, double epsilon) {
  check_discrete(N, epsilon);
  return epsilon * (1.0 - epsilon) / (2.0 * (1.0 + epsilon * static_cast<double>(N - 2)));
}

double direction_prob_discrete(std::int64_t N, double epsilon) {
  check_discrete(N, epsilon);
  const double n = static_cast<double>(N);
  return (3.0 + epsilon * (2.0 * n - 5.0)) / (4.0 * (1.0 + epsilon * (n - 2.0)));
}

double speed_continuous(double N, double v, double r) {
  check_continuous(N, v, r);
  return v * v / (2.0 * v + r * N);
}

double cost_continuous(double N, double v, double r) {
  check_continuous(N, v, r);
  return r * v / (2.0 * v + r * N);
}

double direction_prob_continuous(double N, double v, double r) {
  check_continuous(N, v, r);
  return (3.0 * v + r * N) / (2.0 * (2.0 * v + r * N));
}

Dimensionless dimensionless(double alpha) {
  if (!(alpha > 0.0)) {
    throw ModelError(ErrorCode::AlphaNonpositive, "alpha=" + std::to_string(alpha));
  }
  const double value = 1.0 / (2.0 + alpha);
  return {value, value};
}

double alpha(double N, double v, double r) {
  check_continuous(N, v, r);
  return r * N / v;
}

ScalingError scaling_limit_error(std::int64_t N, double r, double N_c) {
  const double epsilon = N_c * r / (2.0 * static_cast<double>(N));
  check_discrete(N, epsilon);
  const double s_target = speed_continuous(N_c, 1.0, r);
  const double c_target = cost_continuous(N_c, 1.0, r);
  ScalingError out;
  out.epsilon = epsilon;
  out.speed = std::abs(speed_discrete(N, epsilon) - s_target) / s_target;
  out.cost = std::abs(r / epsilon * cost_discrete(N, epsilon) - c_target) / c_target;
  return out;
}

}  // namespace relay::closed_form
