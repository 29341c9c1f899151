#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latkpp/runner.hpp"
#include "latkpp/scenario.hpp"

namespace {

struct Options {
  std::vector<std::string> configs;
  std::string out = "out";
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
  bool no_svg = false;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.configs, "Scenario file (repeatable)")->required();
  cmd->add_option("--out", opt.out, "Output root directory")->capture_default_str();
  cmd->add_option("--jobs", opt.jobs, "Scenarios run in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "Override the scenario seed");
  cmd->add_flag("--no-svg", opt.no_svg, "Skip SVG plots");
}

int run(const std::string& command, const Options& opt) {
  std::vector<latkpp::Scenario> scenarios;
  for (const auto& path : opt.configs) {
    try {
      latkpp::Scenario sc = latkpp::parse_scenario(path);
      if (opt.seed) sc = latkpp::with_seed(std::move(sc), *opt.seed);
      if (command != "run" && latkpp::to_string(sc.kind) != command) {
        std::cerr << path << ": scenario kind is " << latkpp::to_string(sc.kind)
                  << ", not " << command << " (use `latkpp run`)\n";
        return static_cast<int>(latkpp::ExitCode::parse);
      }
      scenarios.push_back(std::move(sc));
    } catch (const latkpp::ParseError& e) {
      std::cerr << e.what() << "\n";
      return static_cast<int>(latkpp::ExitCode::parse);
    } catch (const std::exception& e) {
      std::cerr << path << ": " << e.what() << "\n";
      return static_cast<int>(latkpp::exit_code_for(e));
    }
  }

  latkpp::RunOptions options;
  options.out_root = opt.out;
  options.svg = !opt.no_svg;
  const auto results = latkpp::run_scenarios(scenarios, options, opt.jobs);
  int code = 0;
  for (const auto& r : results) {
    std::cout << r.summary;
    for (const auto& f : r.files) std::cout << "  wrote " << f.string() << "\n";
    if (!r.error.empty()) std::cerr << r.name << ": " << r.error << "\n";
    if (code == 0 && r.code != latkpp::ExitCode::ok) code = static_cast<int>(r.code);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice Fisher-KPP spreading-speed and front laboratory"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"bounds", "Theoretical speed interval from the dispersion relation"},
      {"averages", "Windowed averages of the growth rate"},
      {"speed", "Measure spreading speeds of a spike datum"},
      {"front", "Build a transition front by the super/sub-solution squeeze"},
      {"critical", "Track the critical front started from min{e^{-mu* i}, M0}"},
      {"stability", "Distance of a random ensemble to the entire solution u+"},
      {"verify", "Randomized comparison, part-metric and zero-number suites"},
      {"run", "Run each scenario according to its declared kind"},
  };
  std::string chosen;
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, opt);
    cmd->callback([&chosen, name = name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(latkpp::ExitCode::parse);
  }
  return run(chosen, opt);
}
