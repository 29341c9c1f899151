#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "latkpp/entire.hpp"

namespace latkpp {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Median of pairwise slopes.
double theil_sen_slope(std::span<const double> x, std::span<const double> y);

/// One sampled profile: values[k] sits at x0 + k * dx.
struct ProfileSlice {
  double t = 0.0;
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> values;

  double x(std::size_t k) const { return x0 + dx * static_cast<double>(k); }
};

/// Position where a nonincreasing profile first drops through `level`,
/// scanning from the left, by linear interpolation.
double crossing_from_left(const ProfileSlice& slice, double level);

/// Largest x where the profile is at or above `level`, interpolated towards
/// the next site (right flank of a bump).
double rightmost_crossing(const ProfileSlice& slice, double level);

/// Smallest x where the profile is at or above `level`, interpolated towards
/// the previous site (left flank of a bump).
double leftmost_crossing(const ProfileSlice& slice, double level);

/// diam{x : low * ref <= u(x) <= high * ref} for a nonincreasing profile.
double interface_width(const ProfileSlice& slice, double ref, double low, double high);

/// Largest increase u_{k+1} - u_k over the slice (0 for a nonincreasing one).
double monotonicity_violation(std::span<const double> values);

struct InterfaceSample {
  double t = 0.0;
  double J = 0.0;
  double width = 0.0;
};

struct InterfaceTrajectory {
  std::vector<InterfaceSample> samples;
  LinearFit fit;
  double width_trend = 0.0;  ///< Theil-Sen slope of width against t
  double max_width = 0.0;

  nlohmann::json to_json() const;
};

struct InterfaceConfig {
  double level_fraction = 0.5;
  double width_low = 0.05;
  double width_high = 0.95;
  double monotone_tolerance = 1e-8;
};

/// J(t) at level level_fraction * u+(t) and the bounded-width diagnostic per slice.
InterfaceTrajectory interface_trajectory(const std::vector<ProfileSlice>& slices,
                                         const EntireSolution& uplus,
                                         const InterfaceConfig& config = {});

}  // namespace latkpp
