#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace relay::cli {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<double> number_list(const json& doc, const char* key) {
  if (!doc.contains(key)) return {};
  const auto& node = doc.at(key);
  if (!node.is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& item : node) {
    if (!item.is_number()) throw ConfigError(std::string("'") + key + "' must hold numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

std::int64_t as_integer(double x, const char* what) {
  if (std::floor(x) != x) throw ConfigError(std::string(what) + " must be an integer");
  return static_cast<std::int64_t>(x);
}

Direction parse_direction(const json& node) {
  if (node.is_number_integer()) {
    const int s = node.get<int>();
    if (s == 1) return Direction::Clockwise;
    if (s == -1) return Direction::CounterClockwise;
  }
  throw ConfigError("directions must be +1 or -1");
}

}  // namespace

void apply_override(json& document, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set expects KEY=VALUE, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &document;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("empty path component in '" + key + "'");
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;

  const auto model = get_or<std::string>(doc, "model", "discrete");
  if (model == "discrete") {
    c.model = Model::Discrete;
  } else if (model == "continuous") {
    c.model = Model::Continuous;
  } else {
    throw ConfigError("model must be 'discrete' or 'continuous', got '" + model + "'");
  }

  const double N = get_or<double>(doc, "N", c.model == Model::Discrete ? 5.0 : 1.0);
  const int m = get_or<int>(doc, "m", 2);
  if (c.model == Model::Discrete) {
    c.discrete = {as_integer(N, "N"), m, get_or<double>(doc, "epsilon", 0.3)};
    if (auto err = discrete_config_error(c.discrete)) {
      throw ConfigError("invalid discrete parameters: " + std::string(to_string(*err)));
    }
  } else {
    c.continuous = {N, get_or<double>(doc, "v", 1.0), get_or<double>(doc, "r", 1.0), m};
    if (auto err = continuous_config_error(c.continuous)) {
      throw ConfigError("invalid continuous parameters: " + std::string(to_string(*err)));
    }
  }

  c.steps = get_or<std::int64_t>(doc, "steps", c.steps);
  if (c.steps < 1) throw ConfigError("steps must be >= 1");
  c.horizon = get_or<double>(doc, "horizon", c.horizon);
  if (!(c.horizon > 0.0)) throw ConfigError("horizon must be > 0");
  const auto replicas = get_or<std::int64_t>(doc, "replicas", 1);
  if (replicas < 1) throw ConfigError("replicas must be >= 1");
  c.replicas = static_cast<std::size_t>(replicas);
  c.seed = get_or<std::uint64_t>(doc, "seed", c.seed);
  const auto threads = get_or<std::int64_t>(doc, "threads", 1);
  if (threads < 1) throw ConfigError("threads must be >= 1");
  c.threads = static_cast<unsigned>(threads);

  if (doc.contains("initial")) c.initial = doc.at("initial");
  if (c.initial.is_string()) {
    const auto kind = c.initial.get<std::string>();
    if (kind != "uniform-random" && kind != "regeneration") {
      throw ConfigError("initial must be 'uniform-random', 'regeneration' or a state object");
    }
    if (kind == "regeneration" && m != 2) throw ConfigError("regeneration start needs m = 2");
  } else if (!c.initial.is_object()) {
    throw ConfigError("initial must be a string or an object");
  }

  if (doc.contains("output")) {
    const auto& out = doc.at("output");
    c.out = get_or<std::string>(out, "report", "");
    c.trace_out = get_or<std::string>(out, "trace", "");
    c.trace_every = get_or<double>(out, "trace_every", 0.0);
  }
  c.out = get_or<std::string>(doc, "out", c.out);

  if (doc.contains("sweep")) {
    const auto& sweep = doc.at("sweep");
    c.sweep.N = number_list(sweep, "N");
    c.sweep.epsilon = number_list(sweep, "epsilon");
    c.sweep.r = number_list(sweep, "r");
    c.sweep.monte_carlo = get_or<bool>(sweep, "monte_carlo", true);
  }
  if (doc.contains("checks")) {
    for (double id : number_list(doc, "checks")) c.checks.push_back(static_cast<int>(as_integer(id, "check id")));
  }
  c.samples = static_cast<std::size_t>(get_or<std::int64_t>(doc, "samples", 1000));

  // Explicit initial states are checked eagerly so errors surface as config errors.
  try {
    if (c.model == Model::Discrete) {
      auto init = discrete_initial(c);
      if (auto* s = std::get_if<DiscreteState>(&init)) check_state(*s, c.discrete);
    } else {
      continuous_initial(c);
    }
  } catch (const ModelError& e) {
    throw ConfigError(std::string("invalid initial state: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config '" + path + "' is not valid JSON");
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc);
}

DiscreteInitial discrete_initial(const ExperimentConfig& config) {
  if (config.initial.is_string()) {
    if (config.initial.get<std::string>() == "regeneration") return RegenerationStart{};
    return UniformStart{};
  }
  const auto& node = config.initial;
  DiscreteState s;
  try {
    for (const auto& x : node.at("positions")) s.positions.push_back(x.get<std::int64_t>());
    for (const auto& d : node.at("directions")) s.directions.push_back(parse_direction(d));
    // Walkers are numbered from 1 in config files.
    s.carrier = node.at("carrier").get<std::size_t>() - 1;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad initial state: ") + e.what());
  }
  return s;
}

ContinuousInitial continuous_initial(const ExperimentConfig& config) {
  if (config.initial.is_string()) {
    if (config.initial.get<std::string>() == "regeneration") return RegenerationStart{};
    return UniformStart{};
  }
  const auto& node = config.initial;
  ContinuousStart s;
  try {
    for (const auto& x : node.at("positions")) s.positions.push_back(x.get<double>());
    for (const auto& d : node.at("directions")) s.directions.push_back(parse_direction(d));
    s.carrier = node.at("carrier").get<std::size_t>() - 1;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad initial state: ") + e.what());
  }
  const auto m = static_cast<std::size_t>(config.continuous.m);
  if (s.positions.size() != m || s.directions.size() != m || s.carrier >= m) {
    throw ConfigError("initial state does not match m");
  }
  for (double x : s.positions) {
    if (!(x >= 0.0 && x < config.continuous.N)) throw ConfigError("initial position outside [0, N)");
  }
  return s;
}

}  // namespace relay::cli
