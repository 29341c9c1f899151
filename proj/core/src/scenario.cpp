#include "latkpp/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace latkpp {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::vector<std::string>>& allowed_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"scenario", {"name", "kind", "seed", "output"}},
      {"forcing", {"type", "r0", "amplitude", "period", "phase", "modes", "levels", "dwell", "seed"}},
      {"reaction", {"shape", "slope", "a", "b", "slope_low", "slope_high"}},
      {"numerics",
       {"dt", "duration", "half_width", "horizon", "windows", "sample_interval", "level_fraction",
        "tol_c", "margin", "spike_support", "spike_height", "gamma", "mu", "subcells",
        "tau_ladder", "output_times", "squeeze_tol", "speed_windows", "members", "start_times",
        "low", "high", "threshold", "trials", "depths", "stop_early"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string suggest(const std::string& word, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_distance = std::string::npos;
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(word, c);
    if (d < best_distance) {
      best_distance = d;
      best = c;
    }
  }
  if (best.empty() || best_distance > std::max<std::size_t>(2, word.size() / 3)) return {};
  return best;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Section> sections) : sections_(std::move(sections)) {}

  std::vector<ParseIssue>& issues() { return issues_; }

  bool has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
  }

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  }

  std::optional<std::string> text(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::optional<double> number(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    const auto v = parse_double(e->value);
    if (!v) issues_.push_back({e->line, key, "expected a number, got '" + e->value + "'"});
    return v;
  }

  std::optional<std::int64_t> integer(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::int64_t v = 0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      issues_.push_back({e->line, key, "expected an integer, got '" + e->value + "'"});
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::uint64_t> unsigned_integer(const std::string& section,
                                                const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::uint64_t v = 0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      issues_.push_back({e->line, key, "expected an unsigned integer, got '" + e->value + "'"});
      return std::nullopt;
    }
    return v;
  }

  std::optional<bool> boolean(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    issues_.push_back({e->line, key, "expected true or false, got '" + e->value + "'"});
    return std::nullopt;
  }

  std::optional<std::vector<double>> list(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto v = parse_double(trim(item));
      if (!v) {
        issues_.push_back({e->line, key, "expected a comma-separated list of numbers"});
        return std::nullopt;
      }
      out.push_back(*v);
    }
    if (out.empty()) {
      issues_.push_back({e->line, key, "list must not be empty"});
      return std::nullopt;
    }
    return out;
  }

  std::optional<std::vector<QuasiperiodicMode>> modes(const std::string& section,
                                                      const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::vector<QuasiperiodicMode> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string pair = trim(item);
      const auto colon = pair.find(':');
      std::optional<double> amp, freq;
      if (colon != std::string::npos) {
        amp = parse_double(trim(pair.substr(0, colon)));
        freq = parse_double(trim(pair.substr(colon + 1)));
      }
      if (!amp || !freq) {
        issues_.push_back({e->line, key, "expected amplitude:frequency pairs separated by commas"});
        return std::nullopt;
      }
      out.push_back({*amp, *freq});
    }
    return out;
  }

  void require(const std::string& section, const std::string& key, const std::string& why) {
    if (!has(section, key)) issues_.push_back({0, key, "missing in [" + section + "]: " + why});
  }

  void forbid(const std::string& section, const std::string& key, const std::string& why) {
    if (const Entry* e = find(section, key)) issues_.push_back({e->line, key, why});
  }

  static std::optional<double> parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = first + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
    return v;
  }

 private:
  std::map<std::string, Section> sections_;
  std::vector<ParseIssue> issues_;
};

std::map<std::string, Section> tokenize(const std::string& text, std::vector<ParseIssue>& issues) {
  std::map<std::string, Section> sections;
  const auto& allowed = allowed_keys();
  std::vector<std::string> section_names;
  for (const auto& [name, _] : allowed) section_names.push_back(name);

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::string current;
  bool current_known = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({line_no, "", "unterminated section header"});
        current_known = false;
        continue;
      }
      current = trim(line.substr(1, line.size() - 2));
      current_known = allowed.count(current) > 0;
      if (!current_known) {
        std::string reason = "unknown section [" + current + "]";
        if (auto s = suggest(current, section_names); !s.empty())
          reason += "; did you mean [" + s + "]?";
        issues.push_back({line_no, current, reason});
      } else if (sections.count(current)) {
        issues.push_back({line_no, current, "section [" + current + "] appears twice"});
      } else {
        sections[current];
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({line_no, "", "expected 'key = value'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (current.empty()) {
      issues.push_back({line_no, key, "key outside of any section"});
      continue;
    }
    if (!current_known) continue;
    const auto& keys = allowed.at(current);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      std::string reason = "unknown key '" + key + "' in [" + current + "]";
      if (auto s = suggest(key, keys); !s.empty()) reason += "; did you mean '" + s + "'?";
      issues.push_back({line_no, key, reason});
      continue;
    }
    if (value.empty()) {
      issues.push_back({line_no, key, "empty value"});
      continue;
    }
    auto& section = sections[current];
    if (section.count(key)) {
      issues.push_back({line_no, key, "duplicate key (first set on line " +
                                          std::to_string(section[key].line) + ")"});
      continue;
    }
    section[key] = {value, line_no};
  }
  return sections;
}

void require_positive(const std::optional<double>& v, const char* key) {
  if (v && !(*v > 0.0)) throw ValidationError(std::string(key) + " must be positive");
}

void require_positive(const std::optional<std::int64_t>& v, const char* key) {
  if (v && !(*v > 0)) throw ValidationError(std::string(key) + " must be positive");
}

void require_positive(const std::optional<std::vector<double>>& v, const char* key) {
  if (!v) return;
  for (double x : *v) {
    if (!(x > 0.0)) throw ValidationError(std::string(key) + " entries must be positive");
  }
}

void validate(const ScenarioNumerics& n) {
  require_positive(n.dt, "dt");
  require_positive(n.duration, "duration");
  require_positive(n.half_width, "half_width");
  require_positive(n.horizon, "horizon");
  require_positive(n.windows, "windows");
  require_positive(n.sample_interval, "sample_interval");
  require_positive(n.tol_c, "tol_c");
  require_positive(n.spike_support, "spike_support");
  require_positive(n.spike_height, "spike_height");
  require_positive(n.gamma, "gamma");
  require_positive(n.mu, "mu");
  require_positive(n.tau_ladder, "tau_ladder");
  require_positive(n.squeeze_tol, "squeeze_tol");
  require_positive(n.speed_windows, "speed_windows");
  require_positive(n.members, "members");
  require_positive(n.low, "low");
  require_positive(n.high, "high");
  require_positive(n.threshold, "threshold");
  require_positive(n.trials, "trials");
  require_positive(n.depths, "depths");
  if (n.margin && !(*n.margin >= 0.0)) throw ValidationError("margin must be >= 0");
  if (n.level_fraction && !(*n.level_fraction > 0.0 && *n.level_fraction < 1.0))
    throw ValidationError("level_fraction must lie in (0, 1)");
  if (n.subcells && *n.subcells < 1) throw ValidationError("subcells must be positive");
  if (n.low && n.high && *n.low > *n.high) throw ValidationError("low must not exceed high");
  if (n.output_times) {
    for (double t : *n.output_times) {
      if (!(t >= 0.0)) throw ValidationError("output_times entries must be >= 0");
    }
  }
  if (n.start_times) {
    for (double t : *n.start_times) {
      if (!std::isfinite(t)) throw ValidationError("start_times entries must be finite");
    }
  }
  if (n.depths && !std::is_sorted(n.depths->begin(), n.depths->end()))
    throw ValidationError("depths must be increasing");
}

}  // namespace

std::string ParseIssue::str() const {
  std::string out = line > 0 ? "line " + std::to_string(line) : std::string("file");
  if (!key.empty()) out += ", key '" + key + "'";
  return out + ": " + reason;
}

namespace {

std::string parse_message(const std::string& origin, const std::vector<ParseIssue>& issues) {
  std::string msg = origin + ": " + std::to_string(issues.size()) + " parse error(s)";
  for (const auto& issue : issues) msg += "\n  " + issue.str();
  return msg;
}

}  // namespace

ParseError::ParseError(std::string origin, std::vector<ParseIssue> issues)
    : Error(parse_message(origin, issues)), origin_(std::move(origin)), issues_(std::move(issues)) {}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::bounds: return "bounds";
    case ScenarioKind::speed: return "speed";
    case ScenarioKind::front: return "front";
    case ScenarioKind::critical: return "critical";
    case ScenarioKind::stability: return "stability";
    case ScenarioKind::verify: return "verify";
    case ScenarioKind::averages: return "averages";
  }
  return "unknown";
}

std::optional<ScenarioKind> scenario_kind_from(const std::string& text) {
  for (auto k : {ScenarioKind::bounds, ScenarioKind::speed, ScenarioKind::front,
                 ScenarioKind::critical, ScenarioKind::stability, ScenarioKind::verify,
                 ScenarioKind::averages}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  std::vector<ParseIssue> issues;
  Reader rd(tokenize(text, issues));
  Scenario sc;
  sc.origin = origin;

  rd.require("scenario", "name", "every scenario needs a name");
  rd.require("scenario", "kind", "one of bounds, speed, front, critical, stability, verify, averages");
  sc.name = rd.text("scenario", "name").value_or("");
  if (const auto kind = rd.text("scenario", "kind")) {
    if (const auto k = scenario_kind_from(*kind)) {
      sc.kind = *k;
    } else {
      std::vector<std::string> kinds{"bounds", "speed", "front", "critical",
                                     "stability", "verify", "averages"};
      std::string reason = "unknown kind '" + *kind + "'";
      if (auto s = suggest(*kind, kinds); !s.empty()) reason += "; did you mean '" + s + "'?";
      issues.push_back({rd.find("scenario", "kind")->line, "kind", reason});
    }
  }
  sc.seed = rd.unsigned_integer("scenario", "seed").value_or(1);
  sc.output = rd.text("scenario", "output").value_or(sc.name);

  rd.require("forcing", "type", "one of constant, periodic, quasiperiodic, switching");
  const std::string type = rd.text("forcing", "type").value_or("");
  const auto r0 = rd.number("forcing", "r0");
  const auto amplitude = rd.number("forcing", "amplitude");
  const auto period = rd.number("forcing", "period");
  const auto phase = rd.number("forcing", "phase");
  const auto modes = rd.modes("forcing", "modes");
  const auto levels = rd.list("forcing", "levels");
  const auto dwell = rd.number("forcing", "dwell");
  const auto forcing_seed = rd.unsigned_integer("forcing", "seed");
  const std::map<std::string, std::set<std::string>> family_keys{
      {"constant", {"type", "r0"}},
      {"periodic", {"type", "r0", "amplitude", "period", "phase"}},
      {"quasiperiodic", {"type", "r0", "modes"}},
      {"switching", {"type", "levels", "dwell", "seed"}},
  };
  if (!type.empty()) {
    const auto family = family_keys.find(type);
    if (family == family_keys.end()) {
      std::vector<std::string> names{"constant", "periodic", "quasiperiodic", "switching"};
      std::string reason = "unknown forcing type '" + type + "'";
      if (auto s = suggest(type, names); !s.empty()) reason += "; did you mean '" + s + "'?";
      issues.push_back({rd.find("forcing", "type")->line, "type", reason});
    } else {
      for (const auto& key : allowed_keys().at("forcing")) {
        if (!family->second.count(key))
          rd.forbid("forcing", key, "does not apply to " + type + " forcing");
      }
      if (type == "constant" || type == "periodic" || type == "quasiperiodic")
        rd.require("forcing", "r0", "base growth rate");
      if (type == "periodic") {
        rd.require("forcing", "amplitude", "periodic amplitude");
        rd.require("forcing", "period", "periodic period");
      }
      if (type == "quasiperiodic") rd.require("forcing", "modes", "amplitude:frequency pairs");
      if (type == "switching") {
        rd.require("forcing", "levels", "switching levels");
        rd.require("forcing", "dwell", "segment length");
      }
    }
  }

  const std::string shape = rd.text("reaction", "shape").value_or("logistic");
  const auto slope = rd.number("reaction", "slope");
  const auto qa = rd.number("reaction", "a");
  const auto qb = rd.number("reaction", "b");
  const auto slope_low = rd.number("reaction", "slope_low");
  const auto slope_high = rd.number("reaction", "slope_high");
  const std::map<std::string, std::set<std::string>> shape_keys{
      {"logistic", {"shape", "slope"}},
      {"quadratic", {"shape", "a", "b"}},
      {"saturating", {"shape", "slope_low", "slope_high"}},
  };
  const auto shape_it = shape_keys.find(shape);
  if (shape_it == shape_keys.end()) {
    std::vector<std::string> names{"logistic", "quadratic", "saturating"};
    std::string reason = "unknown shape '" + shape + "'";
    if (auto s = suggest(shape, names); !s.empty()) reason += "; did you mean '" + s + "'?";
    issues.push_back({rd.find("reaction", "shape")->line, "shape", reason});
  } else {
    for (const auto& key : allowed_keys().at("reaction")) {
      if (!shape_it->second.count(key))
        rd.forbid("reaction", key, "does not apply to the " + shape + " shape");
    }
    if (shape == "quadratic") {
      rd.require("reaction", "a", "linear coefficient");
      rd.require("reaction", "b", "quadratic coefficient");
    }
    if (shape == "saturating") {
      rd.require("reaction", "slope_low", "lower bound of g'");
      rd.require("reaction", "slope_high", "upper bound of g'");
    }
  }

  ScenarioNumerics& n = sc.numerics;
  n.dt = rd.number("numerics", "dt");
  n.duration = rd.number("numerics", "duration");
  n.half_width = rd.integer("numerics", "half_width");
  n.horizon = rd.number("numerics", "horizon");
  n.windows = rd.list("numerics", "windows");
  n.sample_interval = rd.number("numerics", "sample_interval");
  n.level_fraction = rd.number("numerics", "level_fraction");
  n.tol_c = rd.number("numerics", "tol_c");
  n.margin = rd.number("numerics", "margin");
  n.spike_support = rd.integer("numerics", "spike_support");
  n.spike_height = rd.number("numerics", "spike_height");
  n.gamma = rd.number("numerics", "gamma");
  n.mu = rd.number("numerics", "mu");
  if (const auto sub = rd.integer("numerics", "subcells")) n.subcells = static_cast<int>(*sub);
  n.tau_ladder = rd.list("numerics", "tau_ladder");
  n.output_times = rd.list("numerics", "output_times");
  n.squeeze_tol = rd.number("numerics", "squeeze_tol");
  n.speed_windows = rd.list("numerics", "speed_windows");
  n.members = rd.integer("numerics", "members");
  n.start_times = rd.list("numerics", "start_times");
  n.low = rd.number("numerics", "low");
  n.high = rd.number("numerics", "high");
  n.threshold = rd.number("numerics", "threshold");
  n.trials = rd.integer("numerics", "trials");
  n.depths = rd.list("numerics", "depths");
  n.stop_early = rd.boolean("numerics", "stop_early");
  if (n.gamma && n.mu) {
    issues.push_back({rd.find("numerics", "mu")->line, "mu", "set either gamma or mu, not both"});
  }

  issues.insert(issues.end(), rd.issues().begin(), rd.issues().end());
  if (!issues.empty()) {
    std::stable_sort(issues.begin(), issues.end(), [](const ParseIssue& a, const ParseIssue& b) {
      return a.line < b.line;
    });
    throw ParseError(origin, std::move(issues));
  }

  if (type == "constant") {
    sc.forcing = Forcing::constant(*r0);
  } else if (type == "periodic") {
    sc.forcing = Forcing::periodic(*r0, *amplitude, *period, phase.value_or(0.0));
  } else if (type == "quasiperiodic") {
    sc.forcing = Forcing::quasiperiodic(*r0, *modes);
  } else {
    sc.forcing = Forcing::switching(*levels, *dwell, forcing_seed.value_or(sc.seed));
    sc.forcing_seed_inherited = !forcing_seed.has_value();
  }
  if (shape == "logistic") {
    sc.reaction = Reaction::logistic(sc.forcing, slope.value_or(1.0));
  } else if (shape == "quadratic") {
    sc.reaction = Reaction::with_shape(sc.forcing, QuadraticShape{*qa, *qb});
  } else {
    sc.reaction = Reaction::with_shape(sc.forcing, SaturatingShape{*slope_low, *slope_high});
  }
  validate(n);
  return sc;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), {{0, "", "cannot open file"}});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path.string());
}

}  // namespace latkpp
