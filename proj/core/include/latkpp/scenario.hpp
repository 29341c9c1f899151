#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "latkpp/errors.hpp"
#include "latkpp/forcing.hpp"
#include "latkpp/reaction.hpp"

namespace latkpp {

struct ParseIssue {
  std::size_t line = 0;  ///< 1-based; 0 when the issue is not tied to a line
  std::string key;
  std::string reason;

  std::string str() const;
};

/// Raised with every located issue found in one scenario file.
class ParseError : public Error {
 public:
  ParseError(std::string origin, std::vector<ParseIssue> issues);

  const std::string& origin() const { return origin_; }
  const std::vector<ParseIssue>& issues() const { return issues_; }

 private:
  std::string origin_;
  std::vector<ParseIssue> issues_;
};

enum class ScenarioKind { bounds, speed, front, critical, stability, verify, averages };

std::string to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from(const std::string& text);

/// Numeric overrides from the [numerics] section. Unset fields fall back to
/// the defaults of the experiment configuration structs (documented table).
struct ScenarioNumerics {
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<std::int64_t> half_width;
  std::optional<double> horizon;
  std::optional<std::vector<double>> windows;
  std::optional<double> sample_interval;
  std::optional<double> level_fraction;
  std::optional<double> tol_c;
  std::optional<double> margin;
  std::optional<std::int64_t> spike_support;
  std::optional<double> spike_height;
  std::optional<double> gamma;
  std::optional<double> mu;
  std::optional<int> subcells;
  std::optional<std::vector<double>> tau_ladder;
  std::optional<std::vector<double>> output_times;
  std::optional<double> squeeze_tol;
  std::optional<std::vector<double>> speed_windows;
  std::optional<std::int64_t> members;
  std::optional<std::vector<double>> start_times;
  std::optional<double> low;
  std::optional<double> high;
  std::optional<double> threshold;
  std::optional<std::int64_t> trials;
  std::optional<std::vector<double>> depths;
  std::optional<bool> stop_early;
};

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::bounds;
  std::uint64_t seed = 1;
  /// Output directory relative to the --out root; defaults to `name`.
  std::string output;
  Forcing forcing;
  /// True when a switching forcing inherited the [scenario] seed.
  bool forcing_seed_inherited = false;
  Reaction reaction;
  ScenarioNumerics numerics;
  std::string origin;
};

/// Levenshtein distance, used for "did you mean" suggestions.
std::size_t edit_distance(const std::string& a, const std::string& b);

Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<text>");
Scenario parse_scenario(const std::filesystem::path& path);

}  // namespace latkpp
