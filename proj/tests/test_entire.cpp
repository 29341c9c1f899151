#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "latkpp/entire.hpp"
#include "latkpp/errors.hpp"
#include "oracles.hpp"

using namespace latkpp;

namespace {

// For u' = u (r(t) - u) the reciprocal w = 1/u solves w' = 1 - r w, whose
// bounded solution is w(t) = int_{-inf}^t exp(-int_s^t r) ds.
double periodic_logistic_oracle(double t, double amp) {
  const double k = 2.0 * std::numbers::pi;
  auto R = [&](double s) { return s - amp / k * std::cos(k * s); };
  const double w = oracle::simpson([&](double s) { return std::exp(R(s) - R(t)); }, t - 60.0, t,
                                   60000);
  return 1.0 / w;
}

}  // namespace

TEST(Pullback, ConstantUnitGrowthIsIdenticallyOne) {
  const EntireSolution u = pullback_uplus(Reaction::logistic(Forcing::constant(1.0)), -5.0, 5.0);
  for (double v : u.values()) EXPECT_NEAR(v, 1.0, 1e-14);
  EXPECT_TRUE(u.converged());
  EXPECT_FALSE(u.not_converged());
}

TEST(Pullback, ConstantGrowthGivesItsLevel) {
  const EntireSolution u = pullback_uplus(Reaction::logistic(Forcing::constant(1.7)), 0.0, 3.0);
  for (double t : {0.0, 0.123, 2.9}) EXPECT_NEAR(u(t), 1.7, 1e-12);
}

TEST(Pullback, PeriodicMatchesIntegralRepresentation) {
  const Reaction r = Reaction::logistic(Forcing::periodic(1.0, 0.5, 1.0));
  const EntireSolution u = pullback_uplus(r, -2.0, 2.0);
  for (double t : {-1.7, -0.25, 0.0, 0.31, 1.5}) {
    EXPECT_NEAR(u(t), periodic_logistic_oracle(t, 0.5), 1e-9) << "t = " << t;
  }
}

TEST(Pullback, PeriodicSolutionIsPeriodic) {
  const Reaction r = Reaction::logistic(Forcing::periodic(1.0, 0.5, 1.0));
  const EntireSolution u = pullback_uplus(r, 0.0, 3.0);
  for (double t = 0.0; t <= 2.0; t += 0.0625) EXPECT_NEAR(u(t + 1.0), u(t), 1e-8);
}

TEST(Pullback, DepthLadderIsMonotoneAndConverges) {
  const Reaction r = Reaction::logistic(Forcing::periodic(1.0, 0.5, 1.0));
  const EntireSolution u = pullback_uplus(r, 0.0, 2.0);
  EXPECT_TRUE(u.monotone_in_depth());
  EXPECT_TRUE(u.converged());
  ASSERT_EQ(u.ladder_history().size(), 2u);
  EXPECT_LE(u.ladder_disagreement(), 1e-9);
}

TEST(Pullback, StaysBetweenTheLevelsOfTheForcing) {
  const Reaction r = Reaction::logistic(Forcing::switching({0.5, 1.5}, 1.0, 5));
  const EntireSolution u = pullback_uplus(r, 0.0, 50.0);
  EXPECT_GE(u.inf_value(), 0.5 - 1e-9);
  EXPECT_LE(u.sup_value(), 1.5 + 1e-9);
}

TEST(Pullback, InterpolantSatisfiesTheOde) {
  const Reaction r = Reaction::logistic(Forcing::periodic(1.0, 0.5, 1.0));
  const EntireSolution u = pullback_uplus(r, 0.0, 2.0);
  EXPECT_LE(u.ode_residual(), 1e-8);
  for (double t : {0.1, 0.77, 1.333}) {
    EXPECT_NEAR(u.derivative(t), u(t) * r(t, u(t)), 1e-7);
  }
}

TEST(Pullback, ShallowLadderIsFlagged) {
  PullbackConfig c;
  c.depths = {0.5, 1.0};
  const EntireSolution u =
      pullback_uplus(Reaction::logistic(Forcing::periodic(1.0, 0.9, 1.0)), 0.0, 1.0, c);
  EXPECT_FALSE(u.converged());
}

TEST(Pullback, RejectsBadRanges) {
  const Reaction r = Reaction::logistic(Forcing::constant(1.0));
  EXPECT_THROW(pullback_uplus(r, 1.0, 1.0), DomainError);
  PullbackConfig c;
  c.depths = {50.0, 25.0};
  EXPECT_THROW(pullback_uplus(r, 0.0, 1.0, c), DomainError);
  const EntireSolution u = pullback_uplus(r, 0.0, 1.0);
  EXPECT_THROW(u(2.0), DomainError);
}
