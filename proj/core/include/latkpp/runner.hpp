#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "latkpp/scenario.hpp"

namespace latkpp {

/// Process exit codes of the command-line driver.
enum class ExitCode : int {
  ok = 0,
  failure = 1,        ///< any other error
  parse = 2,          ///< ParseError or ValidationError in a scenario
  margin = 3,         ///< MarginViolated
  not_squeezed = 4,   ///< NotSqueezed
  assumption = 5,     ///< AssumptionViolated, DomainError, NoRoot, BracketError
  verdict = 6,        ///< the experiment ran but its verdict is FAIL
};

ExitCode exit_code_for(const std::exception& error);

struct RunOptions {
  std::filesystem::path out_root = "out";
  /// Write SVG plots next to the CSV files.
  bool svg = true;
};

struct RunResult {
  std::string name;
  ScenarioKind kind = ScenarioKind::bounds;
  ExitCode code = ExitCode::ok;
  /// Human-readable summary printed by the driver.
  std::string summary;
  std::string error;
  std::vector<std::filesystem::path> files;
};

/// Re-seeds the scenario; a switching forcing that took its seed from the
/// [scenario] section is rebuilt with the new seed.
Scenario with_seed(Scenario scenario, std::uint64_t seed);

/// Runs one scenario and writes its artifacts below out_root / scenario.output.
/// Module errors are caught and mapped onto RunResult::code.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// Runs independent scenarios on up to `jobs` threads; results keep input order.
std::vector<RunResult> run_scenarios(const std::vector<Scenario>& scenarios,
                                     const RunOptions& options, std::size_t jobs);

}  // namespace latkpp
