#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "relay/model.hpp"

namespace relay::acceptance {

/// One compared quantity. `ok` records whether it met its bound.
struct Measurement {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

struct CheckResult {
  int id = 0;
  std::string title;
  /// The identity or formula the check exercises.
  std::string reference;
  std::vector<Measurement> measurements;
  double seconds = 0.0;
  /// Wall-clock budget in seconds, 0 when unbounded.
  double time_budget = 0.0;
  bool passed = false;
};

struct SuiteOptions {
  std::uint64_t seed = 20'170'301;
  unsigned threads = 1;
  /// Counter-clockwise inverts the handoff rule; used to show that the
  /// simulation checks detect a broken protocol.
  Direction target = Direction::Clockwise;
};

struct Check {
  int id = 0;
  std::string title;
  std::function<CheckResult(const SuiteOptions&)> run;
};

/// The full checklist in order.
const std::vector<Check>& checklist();

std::vector<CheckResult> run_all(const SuiteOptions& options);

/// Runs a single check by id (1-based).
CheckResult run_check(int id, const SuiteOptions& options);

}  // namespace relay::acceptance
