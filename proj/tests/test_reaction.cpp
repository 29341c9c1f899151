#include <cmath>

#include <gtest/gtest.h>

#include "latkpp/errors.hpp"
#include "latkpp/reaction.hpp"

using namespace latkpp;

namespace {

Reaction logistic_constant() { return Reaction::logistic(Forcing::constant(1.0)); }
Reaction logistic_periodic() { return Reaction::logistic(Forcing::periodic(1.0, 0.5, 1.0)); }

}  // namespace

TEST(Reaction, LogisticEquilibriumIsZeroGrowth) {
  EXPECT_DOUBLE_EQ(logistic_constant()(0.0, 1.0), 0.0);
}

TEST(Reaction, LogisticAtZeroIsTheGrowthRate) {
  EXPECT_DOUBLE_EQ(logistic_constant()(3.0, 0.0), 1.0);
}

TEST(Reaction, PeriodicLogisticAtQuarterPeriod) {
  EXPECT_NEAR(logistic_periodic()(0.25, 0.3), 1.2, 1e-15);
}

TEST(Reaction, NegativeStatesUseTheGrowthRate) {
  const Reaction r = logistic_periodic();
  EXPECT_DOUBLE_EQ(r(0.1, -0.5), r(0.1, 0.0));
}

TEST(Reaction, LogisticConstantsFollowTheForcing) {
  const Reaction r = Reaction::logistic(Forcing::periodic(1.0, 0.5, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(r.M0(), 1.5 / 2.0);
  EXPECT_DOUBLE_EQ(r.m_tilde(), 2.0);
  EXPECT_DOUBLE_EQ(r.M_tilde(), 2.0);
}

TEST(Reaction, SaturatingShapeHasDerivativeBounds) {
  const Reaction r = Reaction::with_shape(Forcing::constant(1.0), SaturatingShape{0.5, 2.0});
  // g(u) = 0.5 u + 1.5 (1 - e^{-u}); g' = 0.5 + 1.5 e^{-u} lies in (0.5, 2].
  EXPECT_NEAR(r.M_tilde(), 2.0, 1e-12);
  EXPECT_GE(r.m_tilde(), 0.5);
  EXPECT_NEAR(r.g(r.M0()), 1.0, 1e-12);
  for (double u : {0.0, 0.3, 1.0, 4.0}) {
    EXPECT_NEAR(r(0.0, u), 1.0 - (0.5 * u + 1.5 * (1.0 - std::exp(-u))), 1e-14);
  }
}

TEST(Reaction, QuadraticShapeRootIsM0) {
  const Reaction r = Reaction::with_shape(Forcing::constant(2.0), QuadraticShape{1.0, 1.0});
  // u + u^2 = 2 at u = 1.
  EXPECT_NEAR(r.M0(), 1.0, 1e-12);
}

TEST(Reaction, LinearizedReactionHasSlopeK) {
  const Reaction lin = logistic_periodic().linearized(8.0);
  EXPECT_DOUBLE_EQ(lin.g(1.0), 8.0);
  EXPECT_DOUBLE_EQ(lin.M0(), 1.5 / 8.0);
}

TEST(Reaction, RejectsInvalidShapes) {
  EXPECT_THROW(Reaction::logistic(Forcing::constant(1.0), 0.0), ValidationError);
  EXPECT_THROW(Reaction::with_shape(Forcing::constant(1.0), SaturatingShape{1.0, 0.5}),
               ValidationError);
  EXPECT_THROW(Reaction::logistic(Forcing::constant(-1.0)), ValidationError);
}

TEST(Hypotheses, LogisticFamiliesPass) {
  for (const Reaction& r : {logistic_constant(), logistic_periodic(),
                            Reaction::with_shape(Forcing::periodic(1.0, 0.3, 2.0),
                                                 SaturatingShape{0.5, 1.5})}) {
    const HypothesisReport rep = check_hypotheses(r, HypothesisGrid::defaults(r, 50.0));
    EXPECT_TRUE(rep.all_pass()) << rep.to_json().dump();
    EXPECT_GE(rep.h2_upper_margin, -1e-12);
    EXPECT_GE(rep.h2_lower_margin, -1e-12);
    EXPECT_LE(rep.h1_margin, 1e-12);
    EXPECT_LT(rep.monotone_margin, 0.0);
  }
}

TEST(Hypotheses, SwitchingForcingIsFlaggedAsPiecewise) {
  const Reaction r = Reaction::logistic(Forcing::switching({0.5, 1.5}, 1.0, 2));
  const HypothesisReport rep = check_hypotheses(r, HypothesisGrid::defaults(r, 50.0));
  EXPECT_FALSE(rep.h0_pass);
  EXPECT_EQ(rep.h0_note, "not satisfied - piecewise");
  EXPECT_TRUE(rep.h1_pass);
  EXPECT_TRUE(rep.h2_pass);
}

TEST(Hypotheses, UnderstatedSlopeBoundFailsH2) {
  // Claim m~0 = 2 for a slope-1 logistic: f(t,0) - 2u >= f(t,u) fails.
  const Reaction exact(Forcing::constant(1.0), LinearShape{1.0}, 1.0, 1.0, 1.0);
  const Reaction bad(Forcing::constant(1.0), LinearShape{1.0}, 1.0, 2.0, 2.0);
  EXPECT_TRUE(check_hypotheses(exact, HypothesisGrid::defaults(exact, 10.0)).h2_pass);
  EXPECT_FALSE(check_hypotheses(bad, HypothesisGrid::defaults(bad, 10.0)).h2_pass);
}

TEST(Hypotheses, UnderstatedM0FailsH1) {
  const Reaction bad(Forcing::constant(1.0), LinearShape{1.0}, 0.5, 1.0, 1.0);
  EXPECT_FALSE(check_hypotheses(bad, HypothesisGrid::defaults(bad, 10.0)).h1_pass);
}

TEST(Hypotheses, NonPositiveMeanFails) {
  const Reaction r = Reaction::logistic(Forcing::periodic(-0.1, 0.5, 1.0));
  EXPECT_FALSE(check_hypotheses(r, HypothesisGrid::defaults(r, 10.0)).mean_pass);
}

TEST(Hypotheses, RejectsGridOutsideTheCheckedRange) {
  const Reaction r = logistic_constant();
  HypothesisGrid grid{{0.0}, {0.0, 5.0}};
  EXPECT_THROW(check_hypotheses(r, grid), DomainError);
}
