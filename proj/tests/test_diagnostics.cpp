#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "latkpp/diagnostics.hpp"
#include "latkpp/errors.hpp"

using namespace latkpp;

TEST(PartMetric, DistanceToItselfIsZero) {
  const std::vector<double> u{0.3, 1.0, 2.0};
  EXPECT_EQ(part_metric(u, u), 0.0);
}

TEST(PartMetric, ScalingByTwoGivesLogTwo) {
  const std::vector<double> u{0.3, 1.0, 2.0}, v{0.6, 2.0, 4.0};
  EXPECT_NEAR(part_metric(u, v), std::log(2.0), 1e-15);
  EXPECT_NEAR(part_metric(v, u), std::log(2.0), 1e-15);
}

TEST(PartMetric, TakesTheWorstSite) {
  const std::vector<double> u{1.0, 4.0}, v{2.0, 1.0};
  EXPECT_NEAR(part_metric(u, v), std::log(4.0), 1e-15);
}

TEST(PartMetric, UndefinedForZeroEntries) {
  const std::vector<double> u{1.0, 0.0}, v{1.0, 1.0};
  EXPECT_THROW(part_metric(u, v), Undefined);
}

TEST(PartMetric, SatisfiesTheTriangleInequality) {
  const std::vector<double> a{1.0, 2.0, 0.5}, b{1.5, 1.0, 0.7}, c{0.2, 3.0, 0.9};
  EXPECT_LE(part_metric(a, c), part_metric(a, b) + part_metric(b, c) + 1e-15);
}

TEST(SignChange, SingleCrossingLocatesTheLastPositiveSite) {
  const std::vector<double> u{3.0, 2.0, 1.0, 0.0, 0.0}, v{1.0, 1.0, 1.5, 1.0, 1.0};
  const SignChangeProfile p = sign_change_profile(u, v, 0.0, -2);
  EXPECT_EQ(p.count, 1u);
  ASSERT_TRUE(p.j_t.has_value());
  EXPECT_EQ(*p.j_t, CrossingIndex::finite(-1));
}

TEST(SignChange, UniformlyAboveIsPlusInfinity) {
  const std::vector<double> u{2.0, 2.0, 2.0}, v{1.0, 1.0, 1.0};
  const SignChangeProfile p = sign_change_profile(u, v);
  EXPECT_EQ(p.count, 0u);
  EXPECT_EQ(*p.j_t, CrossingIndex::plus_infinity());
}

TEST(SignChange, UniformlyBelowIsMinusInfinity) {
  const std::vector<double> u{0.0, 0.5}, v{1.0, 1.0};
  const SignChangeProfile p = sign_change_profile(u, v);
  EXPECT_EQ(*p.j_t, CrossingIndex::minus_infinity());
}

TEST(SignChange, NegativeThenPositiveHasNoCrossingIndex) {
  const std::vector<double> u{0.0, 2.0}, v{1.0, 1.0};
  const SignChangeProfile p = sign_change_profile(u, v);
  EXPECT_EQ(p.count, 1u);
  EXPECT_FALSE(p.j_t.has_value());
}

TEST(SignChange, CountsEveryAlternation) {
  const std::vector<double> u{1.0, -1.0, 1.0, -1.0}, v{0.0, 0.0, 0.0, 0.0};
  const SignChangeProfile p = sign_change_profile(u, v);
  EXPECT_EQ(p.count, 3u);
  EXPECT_FALSE(p.j_t.has_value());
}

TEST(SignChange, ToleranceTreatsTinyDifferencesAsZero) {
  const std::vector<double> u{1.0, 1e-14, 0.0}, v{0.0, 0.0, 1e-14};
  EXPECT_EQ(sign_change_profile(u, v, 0.0).count, 1u);
  EXPECT_EQ(sign_change_profile(u, v, 1e-12).count, 0u);
}

TEST(Continuity, ConvergingDataGiveConvergingSolutions) {
  const Reaction r = Reaction::logistic(Forcing::constant(1.0));
  auto limit_datum = [](double x) { return std::abs(x) <= 2.0 ? 0.8 : 0.0; };
  const LatticeState limit = LatticeState::sample(-30, 30, 1, limit_datum);
  std::vector<LatticeState> sequence;
  for (int n = 1; n <= 4; ++n) {
    const double bump = std::pow(10.0, -n);
    // Perturbation far from the probe and a small one inside it.
    sequence.push_back(LatticeState::sample(-30, 30, 1, [&](double x) {
      return limit_datum(x) + (std::abs(x) > 25.0 ? 0.5 : bump);
    }));
  }
  const ContinuityProbe p = probe_continuity(r, sequence, limit, 1.0, -3, 3);
  ASSERT_EQ(p.deviations.size(), 4u);
  EXPECT_TRUE(p.within_gronwall);
  for (std::size_t k = 1; k < p.deviations.size(); ++k) {
    EXPECT_LT(p.deviations[k], p.deviations[k - 1]);
    EXPECT_LT(p.initial_deviations[k], p.initial_deviations[k - 1]);
  }
}

TEST(Continuity, RejectsAProbeOutsideTheWindow) {
  const Reaction r = Reaction::logistic(Forcing::constant(1.0));
  const LatticeState limit = LatticeState::sample(-10, 10, 1, [](double) { return 0.5; });
  EXPECT_THROW(probe_continuity(r, {}, limit, 1.0, -11, 0), DomainError);
}
