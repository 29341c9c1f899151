#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "latkpp/dispersion.hpp"
#include "latkpp/entire.hpp"
#include "latkpp/interface.hpp"
#include "latkpp/lattice.hpp"
#include "latkpp/reaction.hpp"

namespace latkpp {

/// Compactly supported initial datum: `height` on sites |i| <= support / 2.
struct SpikeDatum {
  std::int64_t support = 1;
  double height = 1.0;

  double operator()(std::int64_t i) const;
};

struct SpeedRunConfig {
  std::int64_t half_width = 600;
  double duration = 150.0;
  double dt = 0.01;
  SpikeDatum datum{};
  double level_fraction = 0.5;
  double sample_interval = 0.5;
  /// Relative tolerance on both ends of [c0_minus, c0_plus].
  double tol_c = 0.03;
  double min_r_squared = 0.99;
  double margin = 50.0;
  /// Raise PoorFit when a flank fit falls below min_r_squared.
  bool strict = true;
  /// Trailing windows for the min/max slope estimates, as fractions of the run.
  std::vector<double> trailing_fractions{0.125, 0.25, 0.5};
  PullbackConfig pullback{};
  AverageConfig averages{};
};

struct FlankTrack {
  std::vector<double> t;
  std::vector<double> position;
  LinearFit fit;
  double speed = 0.0;  ///< outward speed (positive when spreading)
};

struct SpeedMeasurement {
  SpikeDatum datum;
  double level_fraction = 0.5;
  FlankTrack left;
  FlankTrack right;
  double window_min_slope = 0.0;
  double window_max_slope = 0.0;
  AverageReport averages;
  SpeedBounds bounds;
  double lower_limit = 0.0;
  double upper_limit = 0.0;
  bool fits_ok = false;
  bool verdict = false;
  RunReport run;

  nlohmann::json to_json() const;
};

/// Level-set tracking of u+(t) * level_fraction on both flanks of a spike
/// run, with linear regression over the trailing half of the run.
SpeedMeasurement measure_spreading_speed(const Reaction& reaction,
                                         const SpeedRunConfig& config = {});

struct HairTriggerConfig {
  std::int64_t half_width = 600;
  double duration = 200.0;
  double dt = 0.01;
  SpikeDatum datum{};
  double threshold = 1e-3;
  double sample_interval = 1.0;
  PullbackConfig pullback{};
  AverageConfig averages{};
};

struct HairTriggerReport {
  double gamma = 0.0;
  double c0_minus = 0.0;
  bool precondition = false;  ///< gamma < 0.9 * c0_minus
  double max_deviation = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};

/// max over |i| <= gamma t of |u_i - u+(t)| over the final quarter of the run.
HairTriggerReport hairtrigger_inside(const Reaction& reaction, double gamma,
                                     const HairTriggerConfig& config = {});

struct StabilityConfig {
  std::int64_t half_width = 100;
  std::size_t members = 8;
  double low = 0.2;
  double high = 3.0;
  std::vector<double> start_times{0.0, 0.3, 0.7};
  double duration = 20.0;
  double dt = 0.01;
  double threshold = 1e-4;
  std::uint64_t seed = 1;
  PullbackConfig pullback{};
};

struct StabilityRun {
  double s = 0.0;
  std::size_t member = 0;
  double distance = 0.0;
  double decay_rate = 0.0;  ///< -slope of ln(distance) against t
};

struct StabilityReport {
  std::vector<StabilityRun> runs;
  double sup_distance = 0.0;
  double min_decay_rate = 0.0;
  bool pass = false;
  nlohmann::json uplus;
  nlohmann::json to_json() const;
};

/// Random data in [low, high] per site, start times s, distance to u+ at s + duration.
StabilityReport stability_experiment(const Reaction& reaction, const StabilityConfig& config = {});

/// sup_i |u_i(s + t) - u+(s + t)| for the datum u_i = value, clamp boundary.
double homogeneous_distance(const Reaction& reaction, double value, double s, double t,
                            const EntireSolution& uplus, double dt = 0.01);

struct CriticalConfig {
  double duration = 300.0;
  double dt = 0.01;
  std::int64_t left = -200;
  /// 0 selects ceil(c0_plus_tilde * duration + 150).
  std::int64_t right = 0;
  double sample_interval = 1.0;
  std::vector<double> windows{25.0, 50.0, 100.0};
  /// Window start times below this fraction of the run are discarded.
  double burn_in_fraction = 1.0 / 3.0;
  double tolerance = 0.05;
  double monotone_tolerance = 1e-10;
  double margin = 50.0;
  PullbackConfig pullback{};
  AverageConfig averages{};
};

struct CriticalFrontReport {
  double mu_star = 0.0;
  double c0_minus_tilde = 0.0;
  std::vector<double> t;
  std::vector<double> J;
  std::vector<double> windows;
  std::vector<double> window_min_speed;
  double liminf_estimate = 0.0;
  double max_monotone_violation = 0.0;
  bool converged = false;
  bool pass = false;
  nlohmann::json to_json() const;
};

/// Evolves min{e^{-mu* i}, M0} and tracks J*(t) at level u+(t)/2.
CriticalFrontReport critical_front_run(const Reaction& reaction, const CriticalConfig& config = {});

struct BracketConfig {
  std::vector<double> offsets{0.25, 0.5, 1.0};
  std::int64_t half_width = 400;
  double duration = 100.0;
  double dt = 0.01;
  double sample_interval = 1.0;
  /// Must lie below v_bar(., 0) = min{e^{-mu i}, u+(0)}.
  SpikeDatum datum{1, 0.5};
  double tolerance = 0.03;
  double order_tolerance = 1e-9;
  PullbackConfig pullback{};
  AverageConfig averages{};
};

struct BracketEntry {
  double gamma = 0.0;
  double mu = 0.0;
  double frame_speed = 0.0;   ///< long-run mean of c(t; mu)
  bool precondition = false;  ///< datum <= v_bar at the start
  double worst_excess = 0.0;  ///< max over outputs of u - v_bar
  bool dominated = false;
};

struct BracketReport {
  double c0_minus_tilde = 0.0;
  std::vector<BracketEntry> entries;
  double certified_bound = 0.0;  ///< least frame speed whose domination held
  bool decreasing = false;       ///< bounds ordered with the offsets
  /// certified_bound - c0_minus_tilde <= min(offsets) + tolerance * c0_minus_tilde
  bool within_tolerance = false;
  nlohmann::json to_json() const;
};

/// Runs a compact datum under each gamma-front super-solution v_bar on the
/// integer lattice and certifies gamma as a spread-speed upper bound.
BracketReport tilde_cstar_bracket(const Reaction& reaction, const BracketConfig& config = {});

struct ReflectionReport {
  double max_difference = 0.0;
  bool bitwise = false;
};

/// Runs a datum and its index reflection and compares u_i with w_{-i}.
ReflectionReport reflection_check(const Reaction& reaction, const std::vector<double>& datum,
                                  double duration, double dt = 0.01);

}  // namespace latkpp
