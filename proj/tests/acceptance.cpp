#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latkpp/dispersion.hpp"
#include "latkpp/output.hpp"
#include "latkpp/runner.hpp"
#include "latkpp/scenario.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using latkpp::format_number;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Timed {
  latkpp::RunResult result;
  double seconds = 0.0;
};

class Acceptance {
 public:
  Acceptance(fs::path scenario_dir, fs::path out) : dir_(std::move(scenario_dir)), out_(std::move(out)) {}

  void run_all() {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir_)) {
      if (e.path().extension() == ".ini") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const latkpp::Scenario sc = latkpp::parse_scenario(f);
      scenarios_.push_back(sc);
      for (const char* pass : {"a", "b"}) {
        latkpp::RunOptions o;
        o.out_root = out_ / pass;
        o.svg = false;
        const auto start = std::chrono::steady_clock::now();
        Timed t{latkpp::run_scenario(sc, o), 0.0};
        t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        runs_[pass][sc.name] = std::move(t);
      }
      std::cerr << "ran " << sc.name << " (" << format_number(runs_["a"][sc.name].seconds)
                << " s, code " << static_cast<int>(runs_["a"][sc.name].result.code) << ")\n";
    }
  }

  const Timed& run(const std::string& name) const { return runs_.at("a").at(name); }

  json report(const std::string& name) const {
    const latkpp::Scenario& sc = scenario(name);
    std::ifstream in(out_ / "a" / sc.output / "report.json");
    if (!in) throw std::runtime_error("no report for " + name + ": " + run(name).result.error);
    return json::parse(in);
  }

  const latkpp::Scenario& scenario(const std::string& name) const {
    for (const auto& s : scenarios_) {
      if (s.name == name) return s;
    }
    throw std::runtime_error("scenario " + name + " is not shipped");
  }

  const std::vector<latkpp::Scenario>& scenarios() const { return scenarios_; }
  const fs::path& out() const { return out_; }

 private:
  fs::path dir_;
  fs::path out_;
  std::vector<latkpp::Scenario> scenarios_;
  std::map<std::string, std::map<std::string, Timed>> runs_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double relative(double value, double reference) { return std::abs(value - reference) / reference; }

// Lower root of speed(., 1) = gamma by bisection on [1e-6, mu_grid].
double oracle_mu_low(double gamma, double mu_grid) {
  double lo = 1e-6, hi = mu_grid;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (oracle::speed(mid, 1.0) > gamma ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Reference {
  oracle::Scan grid;
  oracle::Scan refined;
};

Reference reference_scan() {
  const oracle::Scan grid = oracle::scan_minimum(1.0, 1e-3, 10.0, 1e-5);
  return {grid, oracle::refine_parabolic(grid, 1.0, 1e-5)};
}

Outcome dispersion_exactness(const Reference& ref) {
  const auto start = std::chrono::steady_clock::now();
  const double mu = latkpp::mu_star(1.0);
  const latkpp::Chi1Minimum m = latkpp::minimize_chi1(1.0);
  const latkpp::SpeedBounds b =
      latkpp::speed_bounds(latkpp::estimate_averages(latkpp::Forcing::constant(1.0)));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double d_mu = std::abs(mu - ref.refined.mu);
  const double d_c = std::max(std::abs(m.value - ref.grid.value), std::abs(b.c_min - ref.grid.value));
  Outcome o;
  o.pass = d_mu <= 1e-6 && d_c <= 1e-6 && seconds < 1.0;
  o.detail = "mu*=" + format_number(mu) + " c_min=" + format_number(b.c_min) + " |dmu|=" +
             format_number(d_mu) + " |dc|=" + format_number(d_c) + " runtime=" +
             format_number(seconds) + "s";
  return o;
}

Outcome constant_speed(const Acceptance& a, double c_min) {
  const json m = a.report("constant_speed")["measurement"];
  const double right = m["right"]["speed"], left = m["left"]["speed"];
  const double seconds = a.run("constant_speed").seconds;
  Outcome o;
  o.pass = relative(right, c_min) <= 0.03 && relative(left, c_min) <= 0.03 && seconds < 60.0;
  o.detail = "right=" + format_number(right) + " left=" + format_number(left) + " c_min=" +
             format_number(c_min) + " runtime=" + format_number(seconds) + "s";
  return o;
}

bool averages_converged(const json& avg) {
  return avg["converged_inf"].get<bool>() && avg["converged_sup"].get<bool>() &&
         avg["converged_inf_plus"].get<bool>() && avg["converged_sup_plus"].get<bool>();
}

bool inside_interval(double speed, const json& bounds, double tol) {
  return speed >= bounds["c0_minus"].get<double>() * (1.0 - tol) &&
         speed <= bounds["c0_plus"].get<double>() * (1.0 + tol);
}

Outcome periodic_speed(const Acceptance& a, double c_min) {
  const json m = a.report("periodic_speed")["measurement"];
  const double right = m["right"]["speed"], left = m["left"]["speed"];
  const bool converged = averages_converged(m["averages"]);
  const bool inside = inside_interval(right, m["bounds"], 0.03) && inside_interval(left, m["bounds"], 0.03);
  Outcome o;
  o.pass = relative(right, c_min) <= 0.03 && relative(left, c_min) <= 0.03 && inside && converged;
  o.detail = "right=" + format_number(right) + " left=" + format_number(left) + " [c0_minus, c0_plus]=[" +
             format_number(m["bounds"]["c0_minus"].get<double>()) + ", " +
             format_number(m["bounds"]["c0_plus"].get<double>()) + "] converged=" +
             (converged ? "yes" : "no");
  return o;
}

Outcome switching_sandwich(const Acceptance& a) {
  Outcome o{true, ""};
  for (int k = 1; k <= 5; ++k) {
    const std::string name = "switching_speed_" + std::to_string(k);
    const json m = a.report(name)["measurement"];
    const double right = m["right"]["speed"], left = m["left"]["speed"];
    const bool ok = inside_interval(right, m["bounds"], 0.03) && inside_interval(left, m["bounds"], 0.03);
    o.pass = o.pass && ok;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += "seed " + std::to_string(a.scenario(name).seed) + ": " + format_number(left) + "/" +
                format_number(right) + " in [" +
                format_number(m["bounds"]["c0_minus"].get<double>() * 0.97) + ", " +
                format_number(m["bounds"]["c0_plus"].get<double>() * 1.03) + "]" +
                (ok ? "" : " (outside)");
  }
  return o;
}

double worst_slice_difference(const json& front) {
  double worst = 0.0;
  for (const auto& d : front["slice_differences"]) {
    const double diff = d["sup"].get<double>();
    worst = std::max(worst, diff);
  }
  return worst;
}

double slice_difference_between(const json& front, double t_a, double t_b) {
  for (const auto& d : front["slice_differences"]) {
    if (d["t_a"].get<double>() == t_a && d["t_b"].get<double>() == t_b) return d["sup"];
  }
  throw std::runtime_error("no slice difference between t = " + format_number(t_a) + " and " +
                           format_number(t_b));
}

Outcome front_squeeze(const Acceptance& a, double mu_low) {
  const json c = a.report("constant_front")["front"];
  const json p = a.report("periodic_front")["front"];
  const double final_tau = c["gap_tau"].back();
  const double gap = c["final_gap"];
  const double invariance = worst_slice_difference(c);
  const double mu_hat = c["mu_hat"];
  const double periodicity = slice_difference_between(p, 0.0, 1.0);
  Outcome o;
  o.pass = final_tau == 80.0 && gap < 1e-6 && invariance < 1e-6 &&
           relative(mu_hat, mu_low) < 0.02 && periodicity < 1e-5;
  o.detail = "gap(" + format_number(final_tau) + ")=" + format_number(gap) + " invariance=" +
             format_number(invariance) + " mu_hat=" + format_number(mu_hat) + " mu_low=" +
             format_number(mu_low) + " periodicity=" + format_number(periodicity);
  return o;
}

Outcome residuals(const Acceptance& a) {
  Outcome o{true, ""};
  for (const char* name : {"constant_front", "periodic_front"}) {
    const json r = a.report(name);
    const double sup = r["super_residual"]["extreme"], sub = r["sub_residual"]["extreme"];
    o.pass = o.pass && sup >= -1e-6 && sub <= 1e-6;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += std::string(name) + ": super min " + format_number(sup) + ", sub max " +
                format_number(sub);
  }
  return o;
}

Outcome property_suites(const Acceptance& a) {
  const json r = a.report("property_suites");
  const double seconds = a.run("property_suites").seconds;
  Outcome o{seconds < 120.0, ""};
  const std::vector<std::string> required{"comparison", "part_metric_monotone", "uniform_contraction",
                                          "single_crossing"};
  std::size_t found = 0;
  for (const auto& s : r["properties"]) {
    const std::string name = s["name"];
    const std::size_t trials = s["trials"], violations = s["violations"];
    if (std::find(required.begin(), required.end(), name) != required.end()) ++found;
    o.pass = o.pass && trials == 100 && violations == 0;
    o.detail += name + " " + std::to_string(violations) + "/" + std::to_string(trials) + ", ";
  }
  o.pass = o.pass && found == required.size();
  o.detail += "runtime=" + format_number(seconds) + "s";
  return o;
}

Outcome stability(const Acceptance& a) {
  const json r = a.report("periodic_stability")["stability"];
  const double sup = r["sup_distance"];
  const bool monotone = r["uplus"]["monotone_in_depth"];
  const double disagreement = r["uplus"]["ladder_disagreement"];
  Outcome o;
  o.pass = sup <= 1e-4 && monotone && disagreement <= 1e-9;
  o.detail = "sup_distance=" + format_number(sup) + " over " + std::to_string(r["runs"].size()) +
             " runs, ladder monotone=" + (monotone ? "yes" : "no") + " disagreement=" +
             format_number(disagreement);
  return o;
}

Outcome critical_front(const Acceptance& a, double c_min) {
  const json r = a.report("constant_critical")["critical"];
  const double liminf = r["liminf_estimate"];
  const double violation = r["max_monotone_violation"];
  Outcome o;
  o.pass = relative(liminf, c_min) <= 0.05 && violation <= 1e-10;
  o.detail = "liminf=" + format_number(liminf) + " c_min=" + format_number(c_min) +
             " monotone_violation=" + format_number(violation);
  return o;
}

Outcome determinism(const Acceptance& a) {
  std::size_t compared = 0, differing = 0;
  std::string first_difference;
  for (const auto& sc : a.scenarios()) {
    const fs::path da = a.out() / "a" / sc.output, db = a.out() / "b" / sc.output;
    if (!fs::exists(da)) {
      ++differing;
      if (first_difference.empty()) first_difference = sc.name + " wrote nothing";
      continue;
    }
    for (const auto& e : fs::directory_iterator(da)) {
      if (e.path().extension() != ".csv") continue;
      ++compared;
      const fs::path other = db / e.path().filename();
      if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
        ++differing;
        if (first_difference.empty()) first_difference = e.path().string();
      }
    }
  }
  Outcome o;
  o.pass = compared > 0 && differing == 0;
  o.detail = std::to_string(compared) + " CSV files over " + std::to_string(a.scenarios().size()) +
             " scenarios, " + std::to_string(differing) + " differing" +
             (first_difference.empty() ? "" : " (first: " + first_difference + ")");
  return o;
}

Outcome guarded(const std::function<Outcome()>& check) {
  try {
    return check();
  } catch (const std::exception& e) {
    return {false, std::string("error: ") + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out = "acceptance_out";
  fs::path scenario_dir = LATKPP_SCENARIO_DIR;
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out") out = argv[++i];
    else if (arg == "--scenarios") scenario_dir = argv[++i];
  }
  fs::remove_all(out);

  const Reference ref = reference_scan();
  const double c_min = ref.grid.value;
  const double mu_low = oracle_mu_low(2.5, ref.refined.mu);

  Acceptance acc(scenario_dir, out);
  acc.run_all();

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"dispersion exactness", [&] { return dispersion_exactness(ref); }},
      {"homogenized speed recovery", [&] { return constant_speed(acc, c_min); }},
      {"periodic-media speed", [&] { return periodic_speed(acc, c_min); }},
      {"sandwich property", [&] { return switching_sandwich(acc); }},
      {"front squeeze", [&] { return front_squeeze(acc, mu_low); }},
      {"super/sub residuals", [&] { return residuals(acc); }},
      {"property suites", [&] { return property_suites(acc); }},
      {"stability of u+", [&] { return stability(acc); }},
      {"critical front", [&] { return critical_front(acc, c_min); }},
      {"determinism", [&] { return determinism(acc); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const Outcome o = guarded(criteria[k].second);
    failures += o.pass ? 0 : 1;
    std::printf("criterion %2zu %s  %s: %s\n", k + 1, o.pass ? "PASS" : "FAIL",
                criteria[k].first.c_str(), o.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
