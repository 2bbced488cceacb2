#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>

#include <CLI11.hpp>

#include "relay/closed_form.hpp"
#include "relay/error.hpp"
#include "relay/estimators.hpp"
#include "relay/exact_solver.hpp"
#include "relay/generator.hpp"
#include "relay/random.hpp"
#include "relay/replicas.hpp"

namespace relay::cli {

using nlohmann::json;

namespace {

constexpr std::int64_t kExactLimit = 1000;
constexpr double kExactTolerance = 1e-10;
constexpr double kGeneratorTolerance = 1e-9;

json estimate_json(const RunReport& report, estimators::Estimate (*fn)(const RunReport&)) {
  try {
    const auto e = fn(report);
    return {{"estimate", e.point}, {"stderr", e.std_error}};
  } catch (const ModelError& e) {
    if (e.code() != ErrorCode::TooFewBatches) throw;
  }
  // Too short for batch means: report the plain ratio only.
  const double t = report.total_time;
  double value = 0.0;
  if (fn == &estimators::speed_estimate) value = report.displacement_sum / t;
  if (fn == &estimators::cost_estimate) value = static_cast<double>(report.jump_count) / t;
  if (fn == &estimators::direction_estimate) value = report.clockwise_time / t;
  return {{"estimate", value}, {"stderr", nullptr}};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

json parameters_json(const ExperimentConfig& c) {
  if (c.model == Model::Discrete) {
    return {{"model", "discrete"}, {"N", c.discrete.N}, {"m", c.discrete.m},
            {"epsilon", c.discrete.epsilon}, {"steps", c.steps}};
  }
  return {{"model", "continuous"}, {"N", c.continuous.N}, {"m", c.continuous.m},
          {"v", c.continuous.v}, {"r", c.continuous.r}, {"horizon", c.horizon}};
}

RunReport run_one(const ExperimentConfig& c, std::size_t replica, bool with_trace) {
  const SeedSpec seed{c.seed, replica};
  if (c.model == Model::Discrete) {
    DiscreteRunOptions o;
    o.steps = c.steps;
    o.initial = discrete_initial(c);
    if (with_trace) {
      o.trace_every = c.trace_every > 0 ? static_cast<std::int64_t>(c.trace_every)
                                        : std::max<std::int64_t>(1, c.steps / 1000);
    }
    return simulate_discrete(c.discrete, o, seed);
  }
  ContinuousRunOptions o;
  o.horizon = c.horizon;
  o.initial = continuous_initial(c);
  if (with_trace) o.trace_every = c.trace_every > 0 ? c.trace_every : c.horizon / 1000.0;
  return simulate_continuous(c.continuous, o, seed);
}

void append_csv_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& cell : cells) {
    if (!first) out += ',';
    out += cell;
    first = false;
  }
  out += '\n';
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
  return {buffer, result.ptr};
}

std::string format_fixed(double x) {
  char buffer[400];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x, std::chars_format::fixed);
  return {buffer, result.ptr};
}

json report_to_json(const RunReport& report, bool two_walkers) {
  json j;
  j["model"] = report.model == ModelKind::Discrete ? "discrete" : "continuous";
  j["total_time"] = report.total_time;
  j["displacement_sum"] = report.displacement_sum;
  j["jump_count"] = report.jump_count;
  if (report.model == ModelKind::Continuous) j["meeting_count"] = report.meeting_count;
  j["clockwise_time"] = report.clockwise_time;
  j["batches"] = report.batches.size();
  j["speed"] = estimate_json(report, &estimators::speed_estimate);
  j["cost"] = estimate_json(report, &estimators::cost_estimate);
  j["direction_occupation"] = estimate_json(report, &estimators::direction_estimate);

  json cycles;
  cycles["count"] = report.cycles.size();
  if (!report.cycles.empty()) {
    const auto length = estimators::cycle_length(report.cycles);
    cycles["mean_length"] = {{"estimate", length.point}, {"stderr", length.std_error}};
    if (two_walkers) {
      const auto ex = estimators::excursion_classifier(report.cycles, report.cycle_span);
      cycles["fraction_around"] = {{"estimate", ex.around.point}, {"stderr", ex.around.std_error}};
      cycles["fraction_with_jump"] = {{"estimate", ex.with_jump.point},
                                      {"stderr", ex.with_jump.std_error}};
    }
  }
  j["cycles"] = cycles;
  return j;
}

json check_to_json(const acceptance::CheckResult& r) {
  json measurements = json::array();
  for (const auto& m : r.measurements) {
    measurements.push_back({{"name", m.name},
                            {"value", m.value},
                            {"target", m.target},
                            {"tolerance", m.tolerance},
                            {"ok", m.ok}});
  }
  return {{"id", r.id},
          {"title", r.title},
          {"reference", r.reference},
          {"passed", r.passed},
          {"seconds", r.seconds},
          {"time_budget", r.time_budget},
          {"measurements", measurements}};
}

std::string trace_csv(const RunReport& report) {
  std::string out = report.model == ModelKind::Discrete ? "step,running_speed,running_cost\n"
                                                        : "time,running_speed,running_cost\n";
  for (const auto& p : report.running_trace) {
    append_csv_row(out, {format_fixed(p.time), format_number(p.running_speed),
                         format_number(p.running_cost)});
  }
  return out;
}

CommandOutput cmd_simulate(const ExperimentConfig& c) {
  const bool want_trace = !c.trace_out.empty();
  auto reports = run_replicas(c.replicas, c.threads, [&](std::size_t replica) {
    return run_one(c, replica, want_trace && replica == 0);
  });
  const bool two = (c.model == Model::Discrete ? c.discrete.m : c.continuous.m) == 2;

  json doc;
  doc["parameters"] = parameters_json(c);
  doc["seed"] = c.seed;
  doc["replica_count"] = c.replicas;
  json per = json::array();
  for (const auto& r : reports) per.push_back(report_to_json(r, two));
  doc["replicas"] = per;
  doc["merged"] = report_to_json(merge_all(reports), two);

  if (want_trace) write_file(c.trace_out, trace_csv(reports.front()));
  return {doc.dump(2) + "\n", kOk};
}

CommandOutput cmd_exact(const ExperimentConfig& c) {
  if (c.model != Model::Discrete) throw ConfigError("exact needs model = discrete");
  if (c.discrete.m != 2) throw ConfigError("exact needs m = 2");
  if (c.discrete.N > kExactLimit) {
    throw ConfigError("exact is limited to N <= " + std::to_string(kExactLimit));
  }
  const auto N = c.discrete.N;
  const double eps = c.discrete.epsilon;

  const auto chain = exact::ReducedChain::build(N, eps);
  const auto values = exact::exact_values(N, eps);
  const auto bvp = exact::solve_trace_bvp(N, eps);
  const double A_abs = exact::hitting_prob_oracle(N, eps);
  const double s_f = closed_form::speed_discrete(N, eps);
  const double c_f = closed_form::cost_discrete(N, eps);
  const double p_f = closed_form::direction_prob_discrete(N, eps);
  const double A_f = 2.0 * s_f;

  json deviations = {
      {"speed_exact_vs_formula", std::abs(values.speed - s_f)},
      {"speed_exact_vs_half_A_bvp", std::abs(values.speed - bvp.A / 2.0)},
      {"speed_exact_vs_half_A_absorption", std::abs(values.speed - A_abs / 2.0)},
      {"cost_exact_vs_formula", std::abs(values.cost - c_f)},
      {"cost_exact_vs_epsilon_speed", std::abs(values.cost - eps * values.speed)},
      {"direction_exact_vs_formula", std::abs(values.direction_prob - p_f)},
      {"A_bvp_vs_absorption", std::abs(bvp.A - A_abs)},
      {"A_bvp_vs_formula", std::abs(bvp.A - A_f)},
      {"A_absorption_vs_formula", std::abs(A_abs - A_f)},
  };
  double worst = 0.0;
  for (const auto& [key, value] : deviations.items()) worst = std::max(worst, value.get<double>());

  json doc = {{"N", N},
              {"epsilon", eps},
              {"chain_states", chain.size()},
              {"exact_speed", values.speed},
              {"exact_cost", values.cost},
              {"exact_direction_prob", values.direction_prob},
              {"A_bvp", bvp.A},
              {"A_absorption", A_abs},
              {"closed_form", {{"speed", s_f}, {"cost", c_f}, {"direction_prob", p_f}, {"A", A_f}}},
              {"deviations", deviations},
              {"max_deviation", worst},
              {"tolerance", kExactTolerance},
              {"passed", worst < kExactTolerance}};
  return {doc.dump(2) + "\n", worst < kExactTolerance ? kOk : kValidationFailed};
}

CommandOutput cmd_sweep(const ExperimentConfig& c) {
  const bool discrete = c.model == Model::Discrete;
  std::vector<double> Ns = c.sweep.N;
  std::vector<double> params = discrete ? c.sweep.epsilon : c.sweep.r;
  if (Ns.empty()) Ns = discrete ? std::vector<double>{5, 11, 51} : std::vector<double>{1, 2, 5};
  if (params.empty()) {
    for (int k = 1; k <= 19; ++k) params.push_back(k / 20.0);
  }

  struct Row {
    double N, param;
  };
  std::vector<Row> rows;
  for (double N : Ns) {
    for (double p : params) rows.push_back({N, p});
  }
  // Validate every grid point before any simulation starts.
  for (const auto& row : rows) {
    if (discrete) {
      if (std::floor(row.N) != row.N) throw ConfigError("sweep N must be integers");
      DiscreteConfig d{static_cast<std::int64_t>(row.N), c.discrete.m, row.param};
      if (d.m != 2) throw ConfigError("sweep needs m = 2");
      if (auto err = discrete_config_error(d)) {
        throw ConfigError("invalid sweep point: " + std::string(to_string(*err)));
      }
    } else {
      ContinuousConfig d{row.N, c.continuous.v, row.param, c.continuous.m};
      if (d.m != 2) throw ConfigError("sweep needs m = 2");
      if (auto err = continuous_config_error(d)) {
        throw ConfigError("invalid sweep point: " + std::string(to_string(*err)));
      }
    }
  }

  std::vector<RunReport> mc;
  if (c.sweep.monte_carlo) {
    mc = run_replicas(rows.size(), c.threads, [&](std::size_t i) {
      const SeedSpec seed{c.seed, i};
      if (discrete) {
        DiscreteRunOptions o;
        o.steps = c.steps;
        o.record_cycles = false;
        return simulate_discrete({static_cast<std::int64_t>(rows[i].N), 2, rows[i].param}, o, seed);
      }
      ContinuousRunOptions o;
      o.horizon = c.horizon;
      o.record_cycles = false;
      return simulate_continuous({rows[i].N, c.continuous.v, rows[i].param, 2}, o, seed);
    });
  }

  std::string out = discrete
                        ? "N,epsilon,s_formula,c_formula,s_exact,c_exact,s_mc,c_mc,s_mc_stderr,c_mc_stderr\n"
                        : "N,r,s_formula,c_formula,s_mc,c_mc,s_mc_stderr,c_mc_stderr\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    std::string s_mc, c_mc, s_se, c_se;
    if (!mc.empty()) {
      const json s = estimate_json(mc[i], &estimators::speed_estimate);
      const json k = estimate_json(mc[i], &estimators::cost_estimate);
      s_mc = format_number(s["estimate"].get<double>());
      c_mc = format_number(k["estimate"].get<double>());
      if (!s["stderr"].is_null()) s_se = format_number(s["stderr"].get<double>());
      if (!k["stderr"].is_null()) c_se = format_number(k["stderr"].get<double>());
    }
    if (discrete) {
      const auto N = static_cast<std::int64_t>(row.N);
      std::string s_ex, c_ex;
      if (N <= kExactLimit) {
        const auto ex = exact::exact_values(N, row.param);
        s_ex = format_number(ex.speed);
        c_ex = format_number(ex.cost);
      }
      append_csv_row(out, {std::to_string(N), format_number(row.param),
                           format_number(closed_form::speed_discrete(N, row.param)),
                           format_number(closed_form::cost_discrete(N, row.param)), s_ex, c_ex,
                           s_mc, c_mc, s_se, c_se});
    } else {
      append_csv_row(out, {format_fixed(row.N), format_number(row.param),
                           format_number(closed_form::speed_continuous(row.N, c.continuous.v, row.param)),
                           format_number(closed_form::cost_continuous(row.N, c.continuous.v, row.param)),
                           s_mc, c_mc, s_se, c_se});
    }
  }
  return {out, kOk};
}

CommandOutput cmd_validate(const ExperimentConfig& c, std::ostream& log, Direction target) {
  acceptance::SuiteOptions options;
  options.seed = c.seed;
  options.threads = c.threads;
  options.target = target;

  std::vector<int> ids = c.checks;
  if (ids.empty()) {
    for (const auto& check : acceptance::checklist()) ids.push_back(check.id);
  }
  json checks = json::array();
  bool all = true;
  for (int id : ids) {
    acceptance::CheckResult r;
    try {
      r = acceptance::run_check(id, options);
    } catch (const ModelError& e) {
      if (e.code() == ErrorCode::InvalidArgument) throw ConfigError(e.what());
      // A check that cannot complete counts as failed.
      r.id = id;
      r.title = e.what();
      r.passed = false;
    }
    all = all && r.passed;
    log << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << '\n';
    checks.push_back(check_to_json(r));
  }
  json doc = {{"seed", c.seed}, {"passed", all}, {"checks", checks}};
  return {doc.dump(2) + "\n", all ? kOk : kValidationFailed};
}

CommandOutput cmd_bvp(const ExperimentConfig& c) {
  if (c.model != Model::Discrete) throw ConfigError("bvp needs model = discrete");
  const auto N = c.discrete.N;
  const double eps = c.discrete.epsilon;
  const auto sol = exact::solve_trace_bvp(N, eps);
  const double A_abs = exact::hitting_prob_oracle(N, eps);
  const double A_f = (1.0 - eps) / (1.0 + eps * static_cast<double>(N - 2));

  // Every interior equation of the recursion, checked on the returned tables.
  double residual = std::abs(sol.g_at(0)) + std::abs(sol.f.back() - 1.0);
  for (std::int64_t k = 0; k + 1 < N; ++k) {
    const auto u = static_cast<std::size_t>(k);
    residual = std::max(residual, std::abs(sol.f[u] - (1 - eps) * sol.f[u + 1] - eps * sol.g_at(k)));
    if (k + 2 < N) {
      residual = std::max(residual,
                          std::abs(sol.g_at(k + 1) - (1 - eps) * sol.g_at(k) - eps * sol.f[u + 1]));
    }
  }
  const double worst = std::max({std::abs(sol.A - A_abs), std::abs(sol.A - A_f), residual});
  json doc = {{"N", N},
              {"epsilon", eps},
              {"A", sol.A},
              {"A_absorption", A_abs},
              {"A_closed_form", A_f},
              {"max_recursion_residual", residual},
              {"f", sol.f},
              {"g_from_minus_one", sol.g},
              {"max_deviation", worst},
              {"passed", worst < kExactTolerance}};
  return {doc.dump(2) + "\n", worst < kExactTolerance ? kOk : kValidationFailed};
}

CommandOutput cmd_generator_check(const ExperimentConfig& c) {
  if (c.model != Model::Continuous) throw ConfigError("generator-check needs model = continuous");
  if (c.continuous.m != 2) throw ConfigError("generator-check needs m = 2");
  const auto& cfg = c.continuous;
  auto engine = make_engine({c.seed, 0}, 0);
  std::uniform_real_distribution<double> pos(0.0, cfg.N);
  std::bernoulli_distribution coin(0.5);

  const auto H = generator::h_function(cfg);
  const auto V = generator::v_function(cfg);
  double worst_h = 0.0, worst_v = 0.0, v_min = 1.0, v_max = 0.0;
  std::size_t evaluated = 0;
  while (evaluated < c.samples) {
    generator::GeneratorPoint p;
    p.positions = {pos(engine), pos(engine)};
    p.directions = {coin(engine) ? Direction::Clockwise : Direction::CounterClockwise,
                    coin(engine) ? Direction::Clockwise : Direction::CounterClockwise};
    p.carrier = coin(engine) ? 1 : 0;
    if (generator::in_F(generator::reduce(p, cfg), cfg)) continue;
    worst_h = std::max(worst_h, std::abs(generator::apply_generator(H, p, cfg) + 1.0));
    worst_v = std::max(worst_v, std::abs(generator::apply_generator(V, p, cfg)));
    const double v = V.value(p);
    v_min = std::min(v_min, v);
    v_max = std::max(v_max, v);
    ++evaluated;
  }
  const bool ok = worst_h <= kGeneratorTolerance && worst_v <= kGeneratorTolerance &&
                  v_min >= 0.0 && v_max <= 1.0;
  json doc = {{"N", cfg.N},
              {"v", cfg.v},
              {"r", cfg.r},
              {"samples", evaluated},
              {"max_abs_LH_plus_one", worst_h},
              {"max_abs_LV", worst_v},
              {"V_range", {v_min, v_max}},
              {"mean_return_time_from_F", cfg.N / cfg.v},
              {"escape_probability_from_F", generator::escape_probability_from_F(cfg)},
              {"tolerance", kGeneratorTolerance},
              {"passed", ok}};
  return {doc.dump(2) + "\n", ok ? kOk : kValidationFailed};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Message relay between random walkers on a circle"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "output path (default: stdout)");
  app.add_option("--set", overrides, "override a config key: KEY=VALUE")->take_all();

  auto* simulate = app.add_subcommand("simulate", "run replicas and report long-run statistics");
  auto* exact = app.add_subcommand("exact", "solve the reduced chain and compare with closed forms");
  auto* sweep = app.add_subcommand("sweep", "tabulate speed and cost over a parameter grid (CSV)");
  auto* validate = app.add_subcommand("validate", "run the acceptance checklist");
  auto* bvp = app.add_subcommand("bvp", "solve the trace recursion two ways");
  auto* gen = app.add_subcommand("generator-check", "evaluate the generator on H and V");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    auto config = load_config(config_path, overrides);
    if (seed) config.seed = *seed;
    if (threads) config.threads = *threads;
    if (!out_path.empty()) config.out = out_path;

    CommandOutput result;
    if (simulate->parsed()) {
      result = cmd_simulate(config);
    } else if (exact->parsed()) {
      result = cmd_exact(config);
    } else if (sweep->parsed()) {
      result = cmd_sweep(config);
    } else if (validate->parsed()) {
      result = cmd_validate(config, err);
    } else if (bvp->parsed()) {
      result = cmd_bvp(config);
    } else if (gen->parsed()) {
      result = cmd_generator_check(config);
    }
    if (config.out.empty()) {
      out << result.body;
    } else {
      write_file(config.out, result.body);
    }
    return result.exit_code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace relay::cli
