#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "latkpp/errors.hpp"
#include "latkpp/runner.hpp"

using namespace latkpp;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("latkpp_runner_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario bounds_scenario() {
  return parse_scenario_text(R"([scenario]
name = unit_bounds
kind = bounds
[forcing]
type = constant
r0 = 1
)");
}

}  // namespace

TEST(ExitCodes, MapEveryErrorFamily) {
  EXPECT_EQ(exit_code_for(ParseError("x", {})), ExitCode::parse);
  EXPECT_EQ(exit_code_for(ValidationError("x")), ExitCode::parse);
  EXPECT_EQ(exit_code_for(MarginViolated("x")), ExitCode::margin);
  EXPECT_EQ(exit_code_for(NotSqueezed("x")), ExitCode::not_squeezed);
  EXPECT_EQ(exit_code_for(AssumptionViolated("x")), ExitCode::assumption);
  EXPECT_EQ(exit_code_for(DomainError("x")), ExitCode::assumption);
  EXPECT_EQ(exit_code_for(NoRoot("x")), ExitCode::assumption);
  EXPECT_EQ(exit_code_for(BracketError("x")), ExitCode::assumption);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), ExitCode::failure);
}

TEST(Runner, BoundsScenarioReportsTheMinimalSpeed) {
  RunOptions o;
  o.out_root = scratch("bounds");
  const RunResult r = run_scenario(bounds_scenario(), o);
  EXPECT_EQ(r.code, ExitCode::ok) << r.error;
  EXPECT_NE(r.summary.find("2.073444684205341"), std::string::npos) << r.summary;
  EXPECT_NE(r.summary.find("0.9071032935762899"), std::string::npos) << r.summary;
  EXPECT_TRUE(std::filesystem::exists(o.out_root / "unit_bounds" / "bounds.csv"));
  EXPECT_TRUE(std::filesystem::exists(o.out_root / "unit_bounds" / "report.json"));
  std::filesystem::remove_all(o.out_root);
}

TEST(Runner, RepeatedRunsWriteIdenticalFiles) {
  const Scenario sc = parse_scenario_text(R"([scenario]
name = repeat
kind = speed
seed = 4
[forcing]
type = switching
levels = 0.5, 1.5
dwell = 1
[numerics]
duration = 30
half_width = 160
)");
  RunOptions a, b;
  a.out_root = scratch("repeat_a");
  b.out_root = scratch("repeat_b");
  const RunResult ra = run_scenario(sc, a);
  const RunResult rb = run_scenario(sc, b);
  ASSERT_EQ(ra.files.size(), rb.files.size());
  ASSERT_FALSE(ra.files.empty());
  for (std::size_t k = 0; k < ra.files.size(); ++k) {
    EXPECT_EQ(ra.files[k].filename(), rb.files[k].filename());
    EXPECT_EQ(slurp(ra.files[k]), slurp(rb.files[k])) << ra.files[k];
  }
  std::filesystem::remove_all(a.out_root);
  std::filesystem::remove_all(b.out_root);
}

TEST(Runner, NarrowWindowMapsToTheMarginCode) {
  const Scenario sc = parse_scenario_text(R"([scenario]
name = narrow
kind = speed
[forcing]
type = constant
r0 = 1
[numerics]
duration = 100
half_width = 100
)");
  RunOptions o;
  o.out_root = scratch("narrow");
  const RunResult r = run_scenario(sc, o);
  EXPECT_EQ(r.code, ExitCode::margin);
  EXPECT_FALSE(r.error.empty());
  std::filesystem::remove_all(o.out_root);
}

TEST(Runner, FrontWithoutGammaIsRejected) {
  const Scenario sc = parse_scenario_text(R"([scenario]
name = nofront
kind = front
[forcing]
type = constant
r0 = 1
)");
  RunOptions o;
  o.out_root = scratch("nofront");
  EXPECT_EQ(run_scenario(sc, o).code, ExitCode::parse);
  std::filesystem::remove_all(o.out_root);
}

TEST(Runner, ReseedingRebuildsAnInheritedSwitchingForcing) {
  const Scenario sc = parse_scenario_text(R"([scenario]
name = s
kind = averages
seed = 1
[forcing]
type = switching
levels = 0.5, 1.5
dwell = 1
)");
  const Scenario re = with_seed(sc, 2);
  EXPECT_EQ(re.seed, 2u);
  const Forcing expected = Forcing::switching({0.5, 1.5}, 1.0, 2);
  for (double t = 0.5; t < 40.0; t += 1.0) EXPECT_EQ(re.forcing(t), expected(t));
  EXPECT_EQ(re.reaction.forcing()(7.5), expected(7.5));
}

TEST(Runner, ParallelRunsKeepInputOrder) {
  std::vector<Scenario> list;
  for (const char* name : {"p0", "p1", "p2"}) {
    Scenario sc = bounds_scenario();
    sc.name = sc.output = name;
    list.push_back(sc);
  }
  RunOptions o;
  o.out_root = scratch("parallel");
  const auto results = run_scenarios(list, o, 2);
  ASSERT_EQ(results.size(), 3u);
  EXPECT_EQ(results[0].name, "p0");
  EXPECT_EQ(results[2].name, "p2");
  std::filesystem::remove_all(o.out_root);
}
