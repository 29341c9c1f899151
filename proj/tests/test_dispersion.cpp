#include <cmath>

#include <gtest/gtest.h>

#include "latkpp/dispersion.hpp"
#include "latkpp/errors.hpp"
#include "oracles.hpp"

using namespace latkpp;

TEST(Dispersion, Chi1AtUnitDecayAndUnitGrowth) {
  // 2 cosh(1) - 2 + 1
  EXPECT_NEAR(chi1(1.0, 1.0), 2.0 * std::cosh(1.0) - 1.0, 1e-14);
  EXPECT_NEAR(chi1(1.0, 1.0), 2.0861612696304876, 1e-12);
}

TEST(Dispersion, Chi1MatchesExponentialForm) {
  for (double mu : {1e-3, 0.1, 0.9, 2.0, 7.5}) {
    for (double a : {0.2, 1.0, 2.0}) {
      EXPECT_NEAR(chi1(mu, a), oracle::speed(mu, a), 1e-12 * oracle::speed(mu, a));
    }
  }
}

TEST(Dispersion, Chi2IsTwiceSinh) {
  EXPECT_NEAR(chi2(1.0), 2.0 * std::sinh(1.0), 1e-15);
  EXPECT_NEAR(chi2(1.0), 2.3504023872876028, 1e-14);
}

TEST(Dispersion, Chi2IsTheDerivativeOfMuChi1) {
  const double h = 1e-5;
  for (double mu : {0.3, 1.0, 2.5}) {
    const double fd = ((mu + h) * chi1(mu + h, 1.0) - (mu - h) * chi1(mu - h, 1.0)) / (2 * h);
    EXPECT_NEAR(chi2(mu), fd, 1e-8);
  }
}

TEST(Dispersion, RejectsNonPositiveDecay) {
  EXPECT_THROW(chi1(0.0, 1.0), DomainError);
  EXPECT_THROW(chi2(-1.0), DomainError);
}

TEST(MuStar, UnitGrowthAgreesWithGridScan) {
  const auto grid = oracle::scan_minimum(1.0, 1e-3, 10.0, 1e-5);
  const auto refined = oracle::refine_parabolic(grid, 1.0, 1e-5);
  EXPECT_NEAR(mu_star(1.0), refined.mu, 1e-6);
  EXPECT_NEAR(chi1(mu_star(1.0), 1.0), refined.value, 1e-6);
  EXPECT_NEAR(mu_star(1.0), 0.9071032935762899, 1e-12);
}

TEST(MuStar, SolvesChi1EqualsChi2) {
  for (double a : {0.05, 0.5, 1.0, 2.0, 10.0}) {
    const double m = mu_star(a);
    EXPECT_NEAR(chi1(m, a), chi2(m), 1e-12 * chi2(m)) << "a = " << a;
  }
  EXPECT_NEAR(mu_star(2.0), 1.1996786402577, 1e-10);
}

TEST(MuStar, RejectsNonPositiveAverage) {
  EXPECT_THROW(mu_star(0.0), BracketError);
  EXPECT_THROW(mu_star(-1.0), BracketError);
}

TEST(MinimizeChi1, FindsTheMinimalSpeed) {
  const Chi1Minimum m = minimize_chi1(1.0);
  EXPECT_NEAR(m.mu, 0.9071032935762899, 1e-9);
  EXPECT_NEAR(m.value, 2.073444684205341, 1e-12);
  const Chi1Minimum m2 = minimize_chi1(2.0);
  EXPECT_NEAR(m2.value, 3.01775912307664, 1e-10);
  for (double mu : {0.5, 0.8, 1.0, 1.5}) EXPECT_GE(chi1(mu, 1.0), m.value);
}

TEST(RootPair, StraddlesMuStar) {
  const RootPair p = root_pair(2.5, 1.0);
  EXPECT_FALSE(p.degenerate);
  EXPECT_NEAR(p.mu_low, 0.5036127192899247, 1e-10);
  EXPECT_NEAR(p.mu_high, 1.52485903019062, 1e-10);
  EXPECT_LT(p.mu_low, mu_star(1.0));
  EXPECT_GT(p.mu_high, mu_star(1.0));
  EXPECT_NEAR(chi1(p.mu_low, 1.0), 2.5, 1e-12);
  EXPECT_NEAR(chi1(p.mu_high, 1.0), 2.5, 1e-12);
}

TEST(RootPair, RecoversAKnownRoot) {
  const RootPair p = root_pair(chi1(1.0, 1.0), 1.0);
  EXPECT_NEAR(p.mu_high, 1.0, 1e-12);
  EXPECT_NEAR(p.mu_low, 0.821096796174018, 1e-10);
}

TEST(RootPair, DegenerateAtTheMinimalSpeed) {
  const RootPair p = root_pair(2.073444684205341, 1.0);
  EXPECT_TRUE(p.degenerate);
  EXPECT_NEAR(p.mu_low, p.mu_high, 1e-12);
}

TEST(RootPair, NoRootBelowTheMinimalSpeed) {
  EXPECT_THROW(root_pair(2.0, 1.0), NoRoot);
}

TEST(WaveSpeed, SignalFollowsTheForcing) {
  const Forcing f = Forcing::periodic(1.0, 0.5, 1.0);
  const AffineSignal c = wave_speed_signal(f, 0.7);
  for (double t : {0.0, 0.25, 0.6}) {
    EXPECT_NEAR(c(t), oracle::speed(0.7, f(t)), 1e-13);
  }
}

TEST(SpeedBounds, ConstantForcingCollapsesTheInterval) {
  const SpeedBounds b = speed_bounds(estimate_averages(Forcing::constant(1.0)));
  const auto grid = oracle::refine_parabolic(oracle::scan_minimum(1.0, 1e-3, 10.0, 1e-5), 1.0,
                                             1e-5);
  EXPECT_NEAR(b.c_min, grid.value, 1e-6);
  EXPECT_DOUBLE_EQ(b.c0_minus, b.c0_plus);
  EXPECT_DOUBLE_EQ(b.c0_minus_tilde, b.c0_plus_tilde);
  EXPECT_DOUBLE_EQ(b.c0_minus, b.c0_minus_tilde);
}

TEST(SpeedBounds, ConstantTwoGivesTheLargerMinimalSpeed) {
  const SpeedBounds b = speed_bounds(estimate_averages(Forcing::constant(2.0)));
  EXPECT_NEAR(b.c_min, 3.01775912307664, 1e-10);
  EXPECT_NEAR(b.mu_star, 1.1996786402577, 1e-10);
}

TEST(SpeedBounds, SwitchingIntervalIsOrdered) {
  const SpeedBounds b = speed_bounds(estimate_averages(Forcing::switching({0.5, 1.5}, 1.0, 3)));
  EXPECT_LE(b.c0_minus_tilde, b.c0_minus);
  EXPECT_LE(b.c0_minus, b.c0_plus);
  EXPECT_LE(b.c0_plus, b.c0_plus_tilde);
  EXPECT_LT(b.c0_minus_tilde, b.c0_plus_tilde);
  EXPECT_EQ(b.provenance.at("c0_minus_tilde"), "fbar_inf");
  EXPECT_EQ(b.provenance.at("c0_plus"), "fbar_sup_plus");
}

TEST(SpeedBounds, RefusesNonPositiveLowerAverage) {
  EXPECT_THROW(speed_bounds(estimate_averages(Forcing::periodic(-0.2, 0.5, 1.0))),
               AssumptionViolated);
}
