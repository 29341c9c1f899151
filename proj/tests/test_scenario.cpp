#include <string>

#include <gtest/gtest.h>

#include "latkpp/scenario.hpp"

using namespace latkpp;

namespace {

const std::string kMinimal = R"(
[scenario]
name = tiny
kind = bounds

[forcing]
type = constant
r0 = 1
)";

ParseError parse_error_of(const std::string& text) {
  try {
    parse_scenario_text(text, "test.ini");
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error";
  return ParseError("test.ini", {});
}

}  // namespace

TEST(Scenario, MinimalFileFillsDefaults) {
  const Scenario sc = parse_scenario_text(kMinimal);
  EXPECT_EQ(sc.name, "tiny");
  EXPECT_EQ(sc.kind, ScenarioKind::bounds);
  EXPECT_EQ(sc.seed, 1u);
  EXPECT_EQ(sc.output, "tiny");
  EXPECT_EQ(sc.reaction.shape_name(), "linear");
  EXPECT_DOUBLE_EQ(sc.reaction.M0(), 1.0);
  EXPECT_FALSE(sc.numerics.dt.has_value());
  EXPECT_FALSE(sc.numerics.gamma.has_value());
}

TEST(Scenario, CommentsAndListsAreAccepted) {
  const Scenario sc = parse_scenario_text(R"(
; leading comment
[scenario]   # trailing comment
name = q
kind = averages
[forcing]
type = quasiperiodic
r0 = 1
modes = 0.3:1, 0.2:1.4142135623730951
[numerics]
windows = 10, 25 , 50
)");
  EXPECT_EQ(sc.kind, ScenarioKind::averages);
  ASSERT_TRUE(sc.numerics.windows.has_value());
  EXPECT_EQ(*sc.numerics.windows, (std::vector<double>{10, 25, 50}));
  EXPECT_NEAR(sc.forcing(0.0), 1.0, 1e-15);
}

TEST(Scenario, SwitchingInheritsTheScenarioSeed) {
  const Scenario sc = parse_scenario_text(R"(
[scenario]
name = s
kind = speed
seed = 9
[forcing]
type = switching
levels = 0.5, 1.5
dwell = 1
)");
  EXPECT_TRUE(sc.forcing_seed_inherited);
  const Forcing same = Forcing::switching({0.5, 1.5}, 1.0, 9);
  for (double t = -20.5; t < 20.0; t += 1.0) EXPECT_EQ(sc.forcing(t), same(t));
}

TEST(Scenario, UnknownKeyGetsASuggestionAndItsLine) {
  const ParseError e = parse_error_of(R"([scenario]
name = x
kind = speed
speeed = 2
[forcing]
type = constant
r0 = 1
)");
  ASSERT_EQ(e.issues().size(), 1u);
  EXPECT_EQ(e.issues()[0].line, 4u);
  EXPECT_EQ(e.issues()[0].key, "speeed");
  EXPECT_NE(std::string(e.what()).find("did you mean 'seed'?"), std::string::npos) << e.what();
  EXPECT_NE(std::string(e.what()).find("test.ini"), std::string::npos);
}

TEST(Scenario, AllIssuesAreReportedInLineOrder) {
  const ParseError e = parse_error_of(R"([scenario]
name = x
kind = sped
[forcing]
type = periodic
r0 = abc
amplitude = 0.5
levels = 1, 2
)");
  std::vector<std::size_t> lines;
  for (const auto& issue : e.issues()) lines.push_back(issue.line);
  EXPECT_TRUE(std::is_sorted(lines.begin(), lines.end()));
  const std::string what = e.what();
  EXPECT_NE(what.find("did you mean 'speed'?"), std::string::npos) << what;
  EXPECT_NE(what.find("expected a number, got 'abc'"), std::string::npos) << what;
  EXPECT_NE(what.find("does not apply to periodic forcing"), std::string::npos) << what;
  EXPECT_NE(what.find("period"), std::string::npos) << what;
}

TEST(Scenario, UnknownSectionAndDuplicateKey) {
  const ParseError e = parse_error_of(R"([scenario]
name = x
name = y
kind = bounds
[forcng]
type = constant
)");
  const std::string what = e.what();
  EXPECT_NE(what.find("duplicate key"), std::string::npos) << what;
  EXPECT_NE(what.find("did you mean [forcing]?"), std::string::npos) << what;
}

TEST(Scenario, GammaAndMuAreExclusive) {
  const ParseError e = parse_error_of(kMinimal + "[numerics]\ngamma = 2.5\nmu = 0.5\n");
  EXPECT_NE(std::string(e.what()).find("either gamma or mu"), std::string::npos);
}

TEST(Scenario, NegativeStepIsAValidationError) {
  try {
    parse_scenario_text(kMinimal + "[numerics]\ndt = -0.01\n");
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "dt must be positive");
  }
}

TEST(Scenario, FamilyKeysAreChecked) {
  const ParseError e = parse_error_of(R"([scenario]
name = x
kind = bounds
[forcing]
type = constant
r0 = 1
[reaction]
shape = saturating
slope = 2
)");
  const std::string what = e.what();
  EXPECT_NE(what.find("does not apply to the saturating shape"), std::string::npos) << what;
  EXPECT_NE(what.find("slope_low"), std::string::npos) << what;
}

TEST(Scenario, MissingFileIsAParseError) {
  EXPECT_THROW(parse_scenario("/nonexistent/scenario.ini"), ParseError);
}

TEST(Scenario, KindNamesRoundTrip) {
  for (auto k : {ScenarioKind::bounds, ScenarioKind::speed, ScenarioKind::front,
                 ScenarioKind::critical, ScenarioKind::stability, ScenarioKind::verify,
                 ScenarioKind::averages}) {
    EXPECT_EQ(scenario_kind_from(to_string(k)), k);
  }
  EXPECT_FALSE(scenario_kind_from("spread").has_value());
}

TEST(EditDistance, ClassicExamples) {
  EXPECT_EQ(edit_distance("kitten", "sitting"), 3u);
  EXPECT_EQ(edit_distance("", "abc"), 3u);
  EXPECT_EQ(edit_distance("seed", "seed"), 0u);
  EXPECT_EQ(edit_distance("speeed", "seed"), 2u);
}

TEST(Scenario, StopEarlyIsABoolean) {
  const Scenario sc = parse_scenario_text(kMinimal + "[numerics]\nstop_early = false\n");
  ASSERT_TRUE(sc.numerics.stop_early.has_value());
  EXPECT_FALSE(*sc.numerics.stop_early);
  const ParseError e = parse_error_of(kMinimal + "[numerics]\nstop_early = no\n");
  EXPECT_NE(std::string(e.what()).find("expected true or false"), std::string::npos);
}
