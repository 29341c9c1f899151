#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "latkpp/forcing.hpp"
#include "latkpp/reaction.hpp"

namespace latkpp {

/// Absolute residual tolerance of every dispersion solver.
inline constexpr double kDispersionTolerance = 1e-12;

/// e^{-mu} + e^{mu} - 2, evaluated as 4 sinh^2(mu/2) to avoid cancellation.
double dispersion_numerator(double mu);

/// (e^{-mu} + e^{mu} - 2 + a) / mu
double chi1(double mu, double a);

/// d/dmu (mu * chi1) = e^{mu} - e^{-mu}
double chi2(double mu);

/// Unique positive root of chi2 = chi1, the minimizer of chi1(., a).
double mu_star(double a);

struct Chi1Minimum {
  double mu = 0.0;
  double value = 0.0;
};

/// Golden-section minimization of chi1(., a) on [1e-6, 50] followed by a
/// Newton polish on chi2 = chi1.
Chi1Minimum minimize_chi1(double a);

struct RootPair {
  double mu_low = 0.0;
  double mu_high = 0.0;
  bool degenerate = false;
};

/// The two positive solutions of chi1(mu, a) = gamma.
RootPair root_pair(double gamma, double a);

/// c(t; mu) = (e^{-mu} + e^{mu} - 2 + r(t)) / mu
AffineSignal wave_speed_signal(const Forcing& forcing, double mu);
AffineSignal wave_speed_signal(const Reaction& reaction, double mu);

struct SpeedBounds {
  double a_used = 0.0;
  double mu_star = 0.0;
  double c_min = 0.0;
  double c0_minus = 0.0;
  double c0_plus = 0.0;
  double c0_minus_tilde = 0.0;
  double c0_plus_tilde = 0.0;
  /// bound name -> average it was computed from
  std::map<std::string, std::string> provenance;

  static std::string csv_header();
  std::string csv_row() const;
  nlohmann::json to_json() const;
};

SpeedBounds speed_bounds(const AverageReport& averages);

}  // namespace latkpp
