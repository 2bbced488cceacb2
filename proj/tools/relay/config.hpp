#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relay/continuous_sim.hpp"
#include "relay/discrete_sim.hpp"
#include "relay/model.hpp"

namespace relay::cli {

/// Thrown for malformed or out-of-domain configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Model { Discrete, Continuous };

struct SweepGrid {
  std::vector<double> N;
  std::vector<double> epsilon;
  std::vector<double> r;
  bool monte_carlo = true;
};

struct ExperimentConfig {
  Model model = Model::Discrete;
  DiscreteConfig discrete;
  ContinuousConfig continuous;
  std::int64_t steps = 100'000;
  double horizon = 1e5;
  std::size_t replicas = 1;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// "uniform-random", "regeneration", or an explicit state object.
  nlohmann::json initial = "uniform-random";
  std::string out;
  std::string trace_out;
  double trace_every = 0.0;
  SweepGrid sweep;
  /// Acceptance checks to run (empty: all).
  std::vector<int> checks;
  /// Sample count for generator-check.
  std::size_t samples = 1000;
};

/// Applies one "--set key=value" override to a JSON document. Dotted keys
/// address nested objects; the value is parsed as JSON when possible and
/// taken as a string otherwise.
void apply_override(nlohmann::json& document, const std::string& assignment);

/// Parses and validates a config document.
ExperimentConfig parse_config(const nlohmann::json& document);

/// Reads `path` (if non-empty), applies overrides, then parses.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

DiscreteInitial discrete_initial(const ExperimentConfig& config);
ContinuousInitial continuous_initial(const ExperimentConfig& config);

}  // namespace relay::cli
