#include "relay/model.hpp"

#include <cmath>
#include <string>

namespace relay {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EvenN: return "EvenN";
    case ErrorCode::NOutOfRange: return "NOutOfRange";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::MTooSmall: return "MTooSmall";
    case ErrorCode::SpeedOutOfRange: return "SpeedOutOfRange";
    case ErrorCode::RateOutOfRange: return "RateOutOfRange";
    case ErrorCode::MNotTwo: return "MNotTwo";
    case ErrorCode::AlphaNonpositive: return "AlphaNonpositive";
    case ErrorCode::EventSkipped: return "EventSkipped";
    case ErrorCode::SolverSingular: return "SolverSingular";
    case ErrorCode::StateInF: return "StateInF";
    case ErrorCode::TooFewBatches: return "TooFewBatches";
    case ErrorCode::TooFewCycles: return "TooFewCycles";
    case ErrorCode::NoCycles: return "NoCycles";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ModelError::ModelError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

std::optional<ErrorCode> discrete_config_error(const DiscreteConfig& config) noexcept {
  if (config.N < 3) return ErrorCode::NOutOfRange;
  if (config.N % 2 == 0) return ErrorCode::EvenN;
  if (config.m < 2) return ErrorCode::MTooSmall;
  // Negated comparison so that NaN is rejected too.
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) return ErrorCode::EpsilonOutOfRange;
  return std::nullopt;
}

std::optional<ErrorCode> continuous_config_error(const ContinuousConfig& config) noexcept {
  if (!(config.N > 0.0) || !std::isfinite(config.N)) return ErrorCode::NOutOfRange;
  if (!(config.v > 0.0) || !std::isfinite(config.v)) return ErrorCode::SpeedOutOfRange;
  if (!(config.r > 0.0) || !std::isfinite(config.r)) return ErrorCode::RateOutOfRange;
  if (config.m < 2) return ErrorCode::MTooSmall;
  return std::nullopt;
}

const DiscreteConfig& validate_discrete(const DiscreteConfig& config) {
  if (auto err = discrete_config_error(config)) {
    throw ModelError(*err, "N=" + std::to_string(config.N) + " m=" + std::to_string(config.m) +
                               " epsilon=" + std::to_string(config.epsilon));
  }
  return config;
}

const ContinuousConfig& validate_continuous(const ContinuousConfig& config) {
  if (auto err = continuous_config_error(config)) {
    throw ModelError(*err, "N=" + std::to_string(config.N) + " v=" + std::to_string(config.v) +
                               " r=" + std::to_string(config.r) + " m=" + std::to_string(config.m));
  }
  return config;
}

double wrap_position(double x, double N) noexcept {
  double w = std::fmod(x, N);
  if (w < 0.0) w += N;
  // fmod of a tiny negative number plus N can round up to N itself.
  if (w >= N) w = 0.0;
  return w;
}

std::int64_t wrap_position(std::int64_t x, std::int64_t N) noexcept {
  std::int64_t w = x % N;
  return w < 0 ? w + N : w;
}

double circle_delta(double x1, double x2, double N) noexcept { return wrap_position(x1 - x2, N); }

std::int64_t circle_delta(std::int64_t x1, std::int64_t x2, std::int64_t N) noexcept {
  return wrap_position(x1 - x2, N);
}

}  // namespace relay
