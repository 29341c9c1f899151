#include "latkpp/dispersion.hpp"

#include <algorithm>
#include <cmath>

#include "latkpp/errors.hpp"
#include "latkpp/output.hpp"

namespace latkpp {

namespace {

constexpr double kBracketLow = 1e-6;
constexpr double kBracketHigh = 50.0;

/// mu * (chi2 - chi1); same sign as d chi1 / d mu and strictly increasing.
double stationarity(double mu, double a) {
  return 2.0 * mu * std::sinh(mu) - dispersion_numerator(mu) - a;
}

double stationarity_prime(double mu) { return 2.0 * mu * std::cosh(mu); }

double newton_polish(double mu, double a) {
  for (int i = 0; i < 8; ++i) {
    double step = stationarity(mu, a) / stationarity_prime(mu);
    double next = mu - step;
    if (!(next > 0.0)) break;
    mu = next;
    if (std::abs(step) <= 1e-16 * mu) break;
  }
  return mu;
}

double chi1_prime(double mu, double a) { return (chi2(mu) - chi1(mu, a)) / mu; }

}  // namespace

double dispersion_numerator(double mu) {
  double s = std::sinh(0.5 * mu);
  return 4.0 * s * s;
}

double chi1(double mu, double a) {
  if (!(mu > 0.0)) throw DomainError("chi1 requires mu > 0");
  return (dispersion_numerator(mu) + a) / mu;
}

double chi2(double mu) {
  if (!(mu > 0.0)) throw DomainError("chi2 requires mu > 0");
  return 2.0 * std::sinh(mu);
}

double mu_star(double a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw BracketError("mu_star requires a positive finite average, got " + format_number(a));
  double lo = kBracketLow, hi = kBracketHigh;
  if (stationarity(lo, a) >= 0.0) {
    throw BracketError("chi1 is not decreasing at the lower bracket for a = " + format_number(a));
  }
  while (stationarity(hi, a) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e3) throw BracketError("no upper bracket for mu_star");
  }
  for (int i = 0; i < 200 && hi - lo > 4e-16 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (stationarity(mid, a) < 0.0 ? lo : hi) = mid;
  }
  return newton_polish(0.5 * (lo + hi), a);
}

Chi1Minimum minimize_chi1(double a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw BracketError("chi1 is unbounded below unless a > 0, got " + format_number(a));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = kBracketLow, hi = kBracketHigh;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = chi1(x1, a), f2 = chi1(x2, a);
  for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = chi1(x1, a);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = chi1(x2, a);
    }
  }
  double mu = newton_polish(0.5 * (lo + hi), a);
  return {mu, chi1(mu, a)};
}

RootPair root_pair(double gamma, double a) {
  const double ms = mu_star(a);
  const double c_min = chi1(ms, a);
  if (gamma < c_min - kDispersionTolerance) {
    throw NoRoot("gamma = " + format_number(gamma) + " is below the minimal speed " +
                 format_number(c_min));
  }
  if (std::abs(gamma - c_min) <= kDispersionTolerance) return {ms, ms, true};

  auto residual = [&](double mu) { return chi1(mu, a) - gamma; };
  auto solve = [&](double lo, double hi) {
    // residual(lo) and residual(hi) have opposite signs.
    const bool lo_positive = residual(lo) > 0.0;
    for (int i = 0; i < 200 && hi - lo > 4e-16 * hi; ++i) {
      double mid = 0.5 * (lo + hi);
      ((residual(mid) > 0.0) == lo_positive ? lo : hi) = mid;
    }
    double mu = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
      double d = chi1_prime(mu, a);
      if (d == 0.0) break;
      double next = mu - residual(mu) / d;
      if (!(next >= lo && next <= hi)) break;
      if (std::abs(residual(next)) >= std::abs(residual(mu))) break;
      mu = next;
    }
    return mu;
  };

  double low_end = ms;
  do {
    low_end *= 0.5;
  } while (residual(low_end) <= 0.0);
  double high_end = ms;
  do {
    high_end *= 2.0;
  } while (residual(high_end) <= 0.0);
  return {solve(low_end, ms), solve(ms, high_end), false};
}

AffineSignal wave_speed_signal(const Forcing& forcing, double mu) {
  if (!(mu > 0.0)) throw DomainError("wave speed requires mu > 0");
  return AffineSignal(forcing, dispersion_numerator(mu) / mu, 1.0 / mu);
}

AffineSignal wave_speed_signal(const Reaction& reaction, double mu) {
  return wave_speed_signal(reaction.forcing(), mu);
}

std::string SpeedBounds::csv_header() {
  return "a_used,mu_star,c_min,c0_minus,c0_plus,c0_minus_tilde,c0_plus_tilde";
}

std::string SpeedBounds::csv_row() const {
  std::string row;
  for (double v : {a_used, mu_star, c_min, c0_minus, c0_plus, c0_minus_tilde, c0_plus_tilde}) {
    if (!row.empty()) row += ',';
    row += format_number(v);
  }
  return row;
}

nlohmann::json SpeedBounds::to_json() const {
  nlohmann::json j = {{"a_used", a_used},
                      {"mu_star", mu_star},
                      {"c_min", c_min},
                      {"c0_minus", c0_minus},
                      {"c0_plus", c0_plus},
                      {"c0_minus_tilde", c0_minus_tilde},
                      {"c0_plus_tilde", c0_plus_tilde}};
  j["provenance"] = provenance;
  return j;
}

SpeedBounds speed_bounds(const AverageReport& averages) {
  for (double v : {averages.fbar_inf, averages.fbar_sup, averages.fbar_inf_plus,
                   averages.fbar_sup_plus}) {
    if (!std::isfinite(v)) throw DomainError("averages must be finite");
  }
  if (!(averages.fbar_inf > 0.0)) {
    throw AssumptionViolated("the lower long-run average of r must be positive, got " +
                             format_number(averages.fbar_inf));
  }
  SpeedBounds b;
  b.c0_minus = minimize_chi1(averages.fbar_inf_plus).value;
  b.c0_plus = minimize_chi1(averages.fbar_sup_plus).value;
  auto lower = minimize_chi1(averages.fbar_inf);
  b.c0_minus_tilde = lower.value;
  b.c0_plus_tilde = minimize_chi1(averages.fbar_sup).value;
  b.a_used = averages.fbar_inf;
  b.mu_star = lower.mu;
  b.c_min = lower.value;
  // chi1 is increasing in a, so the ordering follows from the averages chain;
  // clamp away estimation noise of the window scans.
  b.c0_minus = std::max(b.c0_minus, b.c0_minus_tilde);
  b.c0_plus = std::max(b.c0_plus, b.c0_minus);
  b.c0_plus_tilde = std::max(b.c0_plus_tilde, b.c0_plus);
  b.provenance = {{"c0_minus", "fbar_inf_plus"},
                  {"c0_plus", "fbar_sup_plus"},
                  {"c0_minus_tilde", "fbar_inf"},
                  {"c0_plus_tilde", "fbar_sup"},
                  {"mu_star", "fbar_inf"}};
  return b;
}

}  // namespace latkpp
