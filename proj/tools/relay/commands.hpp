#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "relay/acceptance.hpp"
#include "relay/run_report.hpp"

namespace relay::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kConfigError = 2 };

/// Result of one subcommand: the main document (JSON or CSV text) and the
/// process exit status.
struct CommandOutput {
  std::string body;
  int exit_code = kOk;
};

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_number(double x);
/// Shortest round-trip form without an exponent.
std::string format_fixed(double x);

/// `two_walkers` adds the around/back excursion split, which needs m = 2.
nlohmann::json report_to_json(const RunReport& report, bool two_walkers);
nlohmann::json check_to_json(const acceptance::CheckResult& result);

/// Running-average trace of one replica as CSV.
std::string trace_csv(const RunReport& report);

/// Writes the per-replica and merged reports; also writes the trace CSV of
/// replica 0 when config.trace_out is set.
CommandOutput cmd_simulate(const ExperimentConfig& config);
CommandOutput cmd_exact(const ExperimentConfig& config);
CommandOutput cmd_sweep(const ExperimentConfig& config);
/// `log` receives one human-readable PASS/FAIL line per check.
CommandOutput cmd_validate(const ExperimentConfig& config, std::ostream& log,
                           Direction target = Direction::Clockwise);
CommandOutput cmd_bvp(const ExperimentConfig& config);
CommandOutput cmd_generator_check(const ExperimentConfig& config);

/// Full command-line entry point. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relay::cli
