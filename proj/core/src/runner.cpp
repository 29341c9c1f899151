#include "latkpp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "latkpp/dispersion.hpp"
#include "latkpp/errors.hpp"
#include "latkpp/experiments.hpp"
#include "latkpp/fronts.hpp"
#include "latkpp/output.hpp"
#include "latkpp/properties.hpp"

namespace latkpp {

namespace {

namespace fs = std::filesystem;

AverageConfig average_config(const ScenarioNumerics& n) {
  AverageConfig c;
  if (n.horizon) c.horizon = *n.horizon;
  if (n.windows) c.windows = *n.windows;
  return c;
}

PullbackConfig pullback_config(const ScenarioNumerics& n) {
  PullbackConfig c;
  if (n.depths) c.depths = *n.depths;
  return c;
}

class Artifacts {
 public:
  Artifacts(const RunOptions& options, const Scenario& scenario, RunResult& result)
      : dir_(options.out_root / scenario.output), svg_(options.svg), result_(result) {
    fs::create_directories(dir_);
  }

  void csv(const std::string& file, const CsvTable& table) {
    table.write(dir_ / file);
    result_.files.push_back(dir_ / file);
  }

  void csv_text(const std::string& file, const std::string& header, const std::string& row) {
    std::ofstream out(dir_ / file, std::ios::binary);
    out << header << "\r\n" << row << "\r\n";
    if (!out) throw Error("cannot write " + (dir_ / file).string());
    result_.files.push_back(dir_ / file);
  }

  void json(const nlohmann::json& report) {
    write_report(dir_ / "report.json", report);
    result_.files.push_back(dir_ / "report.json");
  }

  void svg(const std::string& file, const std::vector<SvgSeries>& series, std::string_view title,
           std::string_view xlabel, std::string_view ylabel) {
    if (!svg_) return;
    std::ofstream out(dir_ / file, std::ios::binary);
    out << render_svg(series, title, xlabel, ylabel);
    if (!out) throw Error("cannot write " + (dir_ / file).string());
    result_.files.push_back(dir_ / file);
  }

 private:
  fs::path dir_;
  bool svg_;
  RunResult& result_;
};

nlohmann::json base_report(const Scenario& sc) {
  return {{"scenario", sc.name},
          {"kind", to_string(sc.kind)},
          {"seed", sc.seed},
          {"forcing", sc.forcing.to_json()},
          {"reaction", sc.reaction.to_json()}};
}

std::string line(const std::string& key, double value) {
  std::string k = key;
  k.resize(std::max<std::size_t>(k.size() + 1, 22), ' ');
  return "  " + k + format_number(value) + "\n";
}

std::string line(const std::string& key, const std::string& value) {
  std::string k = key;
  k.resize(std::max<std::size_t>(k.size() + 1, 22), ' ');
  return "  " + k + value + "\n";
}

std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

void run_bounds(const Scenario& sc, Artifacts& art, RunResult& res, bool with_bounds) {
  const AverageReport avg = estimate_averages(sc.forcing, average_config(sc.numerics));
  art.csv_text("averages.csv", AverageReport::csv_header(), avg.csv_row());
  CsvTable windows({"window", "fbar_T", "inf_full", "sup_full", "inf_plus", "sup_plus"});
  for (const auto& w : avg.windows) {
    windows.add_numeric_row({w.window, w.fbar_T, w.inf_full, w.sup_full, w.inf_plus, w.sup_plus});
  }
  art.csv("windows.csv", windows);
  nlohmann::json report = base_report(sc);
  report["averages"] = avg.to_json();
  std::string s;
  s += line("fbar_inf", avg.fbar_inf);
  s += line("fbar_inf_plus", avg.fbar_inf_plus);
  s += line("fbar_sup_plus", avg.fbar_sup_plus);
  s += line("fbar_sup", avg.fbar_sup);
  s += line("converged", avg.converged() ? "yes" : "no");
  if (with_bounds) {
    const SpeedBounds b = speed_bounds(avg);
    art.csv_text("bounds.csv", SpeedBounds::csv_header(), b.csv_row());
    report["bounds"] = b.to_json();
    report["hypotheses"] =
        check_hypotheses(sc.reaction, HypothesisGrid::defaults(sc.reaction), average_config(sc.numerics)).to_json();
    s += line("mu_star", b.mu_star);
    s += line("c_min", b.c_min);
    s += line("c0_minus", b.c0_minus);
    s += line("c0_plus", b.c0_plus);
    s += line("c0_minus_tilde", b.c0_minus_tilde);
    s += line("c0_plus_tilde", b.c0_plus_tilde);
  }
  art.json(report);
  res.summary += s;
}

void run_speed(const Scenario& sc, Artifacts& art, RunResult& res) {
  const ScenarioNumerics& n = sc.numerics;
  SpeedRunConfig c;
  if (n.dt) c.dt = *n.dt;
  if (n.duration) c.duration = *n.duration;
  if (n.half_width) c.half_width = *n.half_width;
  if (n.sample_interval) c.sample_interval = *n.sample_interval;
  if (n.level_fraction) c.level_fraction = *n.level_fraction;
  if (n.tol_c) c.tol_c = *n.tol_c;
  if (n.margin) c.margin = *n.margin;
  if (n.spike_support) c.datum.support = *n.spike_support;
  if (n.spike_height) c.datum.height = *n.spike_height;
  c.averages = average_config(n);
  c.pullback = pullback_config(n);
  c.strict = false;
  const SpeedMeasurement m = measure_spreading_speed(sc.reaction, c);

  CsvTable flanks({"t", "left", "right"});
  for (std::size_t k = 0; k < m.right.t.size(); ++k) {
    flanks.add_numeric_row({m.right.t[k], m.left.position[k], m.right.position[k]});
  }
  art.csv("flanks.csv", flanks);
  nlohmann::json report = base_report(sc);
  report["measurement"] = m.to_json();
  art.json(report);
  std::vector<double> neg_left(m.left.position.size());
  std::transform(m.left.position.begin(), m.left.position.end(), neg_left.begin(),
                 [](double x) { return -x; });
  art.svg("flanks.svg", {{"right flank", m.right.t, m.right.position}, {"-left flank", m.left.t, neg_left}},
          sc.name, "t", "level-set position");

  res.summary += line("right_speed", m.right.speed);
  res.summary += line("left_speed", m.left.speed);
  res.summary += line("c0_minus", m.bounds.c0_minus);
  res.summary += line("c0_plus", m.bounds.c0_plus);
  res.summary += line("r_squared_min", std::min(m.left.fit.r_squared, m.right.fit.r_squared));
  res.summary += line("verdict", verdict(m.verdict));
  if (!m.verdict) res.code = ExitCode::verdict;
}

void run_front(const Scenario& sc, Artifacts& art, RunResult& res) {
  const ScenarioNumerics& n = sc.numerics;
  if (!n.gamma && !n.mu) throw ValidationError("front scenarios need gamma or mu");
  SqueezeConfig c;
  if (n.dt) c.dt = *n.dt;
  if (n.subcells) c.subcells = *n.subcells;
  if (n.tau_ladder) c.tau_ladder = *n.tau_ladder;
  if (n.stop_early) c.stop_early = *n.stop_early;
  if (n.output_times) c.output_times = *n.output_times;
  if (n.squeeze_tol) c.tol = *n.squeeze_tol;
  if (n.margin) c.margin = *n.margin;
  c.averages = average_config(n);
  c.pullback = pullback_config(n);
  c.sub.pullback = c.pullback;
  c.strict = false;
  const FrontProfile p = n.gamma ? squeeze_front_gamma(sc.reaction, *n.gamma, c)
                                 : squeeze_front(sc.reaction, *n.mu, c);

  CsvTable profile({"t", "xi", "upper", "lower"});
  std::vector<SvgSeries> series;
  for (const auto& slice : p.slices) {
    SvgSeries s{"t = " + format_number(slice.t), {}, {}};
    for (std::size_t k = 0; k < slice.upper.size(); ++k) {
      const double xi = p.xi(slice, k);
      profile.add_numeric_row({slice.t, xi, slice.upper[k], slice.lower[k]});
      if (xi >= -40.0 && xi <= 40.0) {
        s.x.push_back(xi);
        s.y.push_back(slice.upper[k]);
      }
    }
    series.push_back(std::move(s));
  }
  art.csv("profile.csv", profile);
  CsvTable stages({"tau", "gap", "monotone_violation", "sandwich_violation"});
  for (const auto& st : p.stages) {
    stages.add_numeric_row({st.tau, st.gap, st.monotone_violation, st.sandwich_violation});
  }
  art.csv("stages.csv", stages);
  CsvTable iface({"t", "J", "width"});
  for (const auto& s : p.interface.samples) iface.add_numeric_row({s.t, s.J, s.width});
  art.csv("interface.csv", iface);

  SuperConfig supc;
  supc.pullback = c.pullback;
  supc.averages = c.averages;
  SubConfig subc = c.sub;
  const SuperSolution sup = build_supersolution(sc.reaction, p.mu, supc);
  const SubSolution sub = build_subsolution(sc.reaction, p.mu, p.mu_tilde, subc);
  ResidualGrid grid;
  grid.subcells = c.subcells;
  const ResidualReport rs = verify_supersolution(sup, grid);
  const ResidualReport rb = verify_subsolution(sub, grid);

  nlohmann::json report = base_report(sc);
  report["front"] = p.summary();
  nlohmann::json differences = nlohmann::json::array();
  double worst_difference = 0.0;
  for (std::size_t k = 1; k < p.slices.size(); ++k) {
    const double d = p.slice_difference(k - 1, k, c.margin);
    differences.push_back({{"t_a", p.slices[k - 1].t}, {"t_b", p.slices[k].t}, {"sup", d}});
    worst_difference = std::max(worst_difference, d);
  }
  report["front"]["slice_differences"] = differences;
  report["super_residual"] = rs.to_json();
  report["sub_residual"] = rb.to_json();
  art.json(report);
  art.svg("profile.svg", series, sc.name, "xi", "phi");

  res.summary += line("mu", p.mu);
  res.summary += line("mu_tilde", p.mu_tilde);
  res.summary += line("final_gap", p.final_gap);
  res.summary += line("mu_hat", p.mu_hat);
  res.summary += line("slice_difference", worst_difference);
  res.summary += line("super_min_residual", rs.extreme);
  res.summary += line("sub_max_residual", rb.extreme);
  res.summary += line("squeezed", verdict(p.squeezed));
  if (!p.squeezed) {
    res.code = ExitCode::not_squeezed;
    res.error = "squeeze ended with gap " + format_number(p.final_gap);
  } else if (!rs.pass || !rb.pass) {
    res.code = ExitCode::verdict;
  }
}

void run_critical(const Scenario& sc, Artifacts& art, RunResult& res) {
  const ScenarioNumerics& n = sc.numerics;
  CriticalConfig c;
  if (n.dt) c.dt = *n.dt;
  if (n.duration) c.duration = *n.duration;
  if (n.sample_interval) c.sample_interval = *n.sample_interval;
  if (n.speed_windows) c.windows = *n.speed_windows;
  if (n.margin) c.margin = *n.margin;
  c.averages = average_config(n);
  c.pullback = pullback_config(n);
  const CriticalFrontReport r = critical_front_run(sc.reaction, c);
  CsvTable t({"t", "J"});
  for (std::size_t k = 0; k < r.t.size(); ++k) t.add_numeric_row({r.t[k], r.J[k]});
  art.csv("critical.csv", t);
  CsvTable w({"window", "min_speed"});
  for (std::size_t k = 0; k < r.windows.size(); ++k) {
    w.add_numeric_row({r.windows[k], r.window_min_speed[k]});
  }
  art.csv("windows.csv", w);
  nlohmann::json report = base_report(sc);
  report["critical"] = r.to_json();
  art.json(report);
  art.svg("critical.svg", {{"J*(t)", r.t, r.J}}, sc.name, "t", "J*");
  res.summary += line("mu_star", r.mu_star);
  res.summary += line("liminf_estimate", r.liminf_estimate);
  res.summary += line("c0_minus_tilde", r.c0_minus_tilde);
  res.summary += line("monotone_violation", r.max_monotone_violation);
  res.summary += line("verdict", verdict(r.pass));
  if (!r.pass) res.code = ExitCode::verdict;
}

void run_stability(const Scenario& sc, Artifacts& art, RunResult& res) {
  const ScenarioNumerics& n = sc.numerics;
  StabilityConfig c;
  if (n.dt) c.dt = *n.dt;
  if (n.duration) c.duration = *n.duration;
  if (n.half_width) c.half_width = *n.half_width;
  if (n.members) c.members = static_cast<std::size_t>(*n.members);
  if (n.start_times) c.start_times = *n.start_times;
  if (n.low) c.low = *n.low;
  if (n.high) c.high = *n.high;
  if (n.threshold) c.threshold = *n.threshold;
  c.pullback = pullback_config(n);
  c.seed = sc.seed;
  const StabilityReport r = stability_experiment(sc.reaction, c);
  CsvTable t({"s", "member", "distance", "decay_rate"});
  for (const auto& run : r.runs) {
    t.add_row({format_number(run.s), std::to_string(run.member), format_number(run.distance),
               format_number(run.decay_rate)});
  }
  art.csv("stability.csv", t);
  nlohmann::json report = base_report(sc);
  report["stability"] = r.to_json();
  art.json(report);
  res.summary += line("sup_distance", r.sup_distance);
  res.summary += line("min_decay_rate", r.min_decay_rate);
  res.summary += line("verdict", verdict(r.pass));
  if (!r.pass) res.code = ExitCode::verdict;
}

void run_verify(const Scenario& sc, Artifacts& art, RunResult& res) {
  const ScenarioNumerics& n = sc.numerics;
  PropertyConfig c;
  if (n.trials) c.trials = static_cast<std::size_t>(*n.trials);
  if (n.dt) c.dt = *n.dt;
  if (n.duration) c.duration = *n.duration;
  if (n.half_width) c.half_width = *n.half_width;
  c.seed = sc.seed;
  const auto results = run_property_suites(c);
  CsvTable t({"property", "trials", "violations", "worst", "pass"});
  nlohmann::json list = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    t.add_row({r.name, std::to_string(r.trials), std::to_string(r.violations),
               format_number(r.worst), r.pass() ? "1" : "0"});
    list.push_back(r.to_json());
    res.summary += line(r.name, verdict(r.pass()) + " (" + std::to_string(r.violations) + "/" +
                                    std::to_string(r.trials) + ", worst " +
                                    format_number(r.worst) + ")");
    all = all && r.pass();
  }
  art.csv("properties.csv", t);
  nlohmann::json report = base_report(sc);
  report["properties"] = list;
  art.json(report);
  if (!all) res.code = ExitCode::verdict;
}

}  // namespace

ExitCode exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ParseError*>(&error) || dynamic_cast<const ValidationError*>(&error))
    return ExitCode::parse;
  if (dynamic_cast<const MarginViolated*>(&error)) return ExitCode::margin;
  if (dynamic_cast<const NotSqueezed*>(&error)) return ExitCode::not_squeezed;
  if (dynamic_cast<const AssumptionViolated*>(&error) || dynamic_cast<const DomainError*>(&error) ||
      dynamic_cast<const NoRoot*>(&error) || dynamic_cast<const BracketError*>(&error))
    return ExitCode::assumption;
  return ExitCode::failure;
}

Scenario with_seed(Scenario scenario, std::uint64_t seed) {
  scenario.seed = seed;
  if (scenario.forcing_seed_inherited) {
    if (const auto* sw = std::get_if<SwitchingForcing>(&scenario.forcing.kind())) {
      scenario.forcing = Forcing::switching(sw->levels, sw->dwell, seed);
      scenario.reaction = Reaction::with_shape(scenario.forcing, scenario.reaction.shape());
    }
  }
  return scenario;
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  RunResult res;
  res.name = scenario.name;
  res.kind = scenario.kind;
  res.summary = "scenario " + scenario.name + " (" + to_string(scenario.kind) + ")\n";
  try {
    Artifacts art(options, scenario, res);
    switch (scenario.kind) {
      case ScenarioKind::bounds: run_bounds(scenario, art, res, true); break;
      case ScenarioKind::averages: run_bounds(scenario, art, res, false); break;
      case ScenarioKind::speed: run_speed(scenario, art, res); break;
      case ScenarioKind::front: run_front(scenario, art, res); break;
      case ScenarioKind::critical: run_critical(scenario, art, res); break;
      case ScenarioKind::stability: run_stability(scenario, art, res); break;
      case ScenarioKind::verify: run_verify(scenario, art, res); break;
    }
  } catch (const std::exception& e) {
    res.code = exit_code_for(e);
    res.error = e.what();
  }
  return res;
}

std::vector<RunResult> run_scenarios(const std::vector<Scenario>& scenarios,
                                     const RunOptions& options, std::size_t jobs) {
  std::vector<RunResult> results(scenarios.size());
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(scenarios.size(), 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < scenarios.size(); k = next++) {
      results[k] = run_scenario(scenarios[k], options);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return results;
}

}  // namespace latkpp
