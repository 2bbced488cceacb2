#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relay {

enum class ErrorCode {
  EvenN,
  NOutOfRange,
  EpsilonOutOfRange,
  MTooSmall,
  SpeedOutOfRange,
  RateOutOfRange,
  MNotTwo,
  AlphaNonpositive,
  EventSkipped,
  SolverSingular,
  StateInF,
  TooFewBatches,
  TooFewCycles,
  NoCycles,
  TooFewSamples,
  InvalidState,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every recoverable failure in the library is reported through this type;
/// callers can switch on code() instead of parsing the message.
class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorCode code, const std::string& detail);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace relay
