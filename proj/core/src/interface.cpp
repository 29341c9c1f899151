#include "latkpp/interface.hpp"

#include <algorithm>
#include <cmath>

#include "latkpp/errors.hpp"
#include "latkpp/output.hpp"

namespace latkpp {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw PoorFit("linear fit needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw PoorFit("linear fit needs distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = x.size();
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double e = y[i] - (fit.slope * x[i] + fit.intercept);
      ss_res += e * e;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

double theil_sen_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw PoorFit("Theil-Sen needs >= 2 paired points");
  std::vector<double> slopes;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
    }
  }
  if (slopes.empty()) throw PoorFit("Theil-Sen needs distinct abscissae");
  auto mid = slopes.begin() + static_cast<std::ptrdiff_t>(slopes.size() / 2);
  std::nth_element(slopes.begin(), mid, slopes.end());
  double median = *mid;
  if (slopes.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(slopes.begin(), mid));
  }
  return median;
}

namespace {

double interpolate(double x_a, double u_a, double x_b, double u_b, double level) {
  if (u_a == u_b) return x_a;
  return x_a + (level - u_a) / (u_b - u_a) * (x_b - x_a);
}

}  // namespace

double crossing_from_left(const ProfileSlice& slice, double level) {
  const auto& v = slice.values;
  if (v.empty()) throw NoCrossing("empty profile");
  if (v.front() < level) throw NoCrossing("profile starts below the level");
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    if (v[k] >= level && v[k + 1] < level) {
      return interpolate(slice.x(k), v[k], slice.x(k + 1), v[k + 1], level);
    }
  }
  throw NoCrossing("level " + format_number(level) + " is not crossed");
}

double rightmost_crossing(const ProfileSlice& slice, double level) {
  const auto& v = slice.values;
  for (std::size_t k = v.size(); k-- > 0;) {
    if (v[k] >= level) {
      if (k + 1 == v.size()) throw NoCrossing("profile is above the level at the right edge");
      return interpolate(slice.x(k), v[k], slice.x(k + 1), v[k + 1], level);
    }
  }
  throw NoCrossing("level " + format_number(level) + " is not attained");
}

double leftmost_crossing(const ProfileSlice& slice, double level) {
  const auto& v = slice.values;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] >= level) {
      if (k == 0) throw NoCrossing("profile is above the level at the left edge");
      return interpolate(slice.x(k - 1), v[k - 1], slice.x(k), v[k], level);
    }
  }
  throw NoCrossing("level " + format_number(level) + " is not attained");
}

double interface_width(const ProfileSlice& slice, double ref, double low, double high) {
  const double upper = crossing_from_left(slice, high * ref);
  const double lower = crossing_from_left(slice, low * ref);
  return lower - upper;
}

double monotonicity_violation(std::span<const double> values) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    worst = std::max(worst, values[k + 1] - values[k]);
  }
  return worst;
}

nlohmann::json InterfaceTrajectory::to_json() const {
  nlohmann::json j;
  nlohmann::json t = nlohmann::json::array(), J = nlohmann::json::array(),
                 w = nlohmann::json::array();
  for (const auto& s : samples) {
    t.push_back(s.t);
    J.push_back(s.J);
    w.push_back(s.width);
  }
  j["t"] = t;
  j["J"] = J;
  j["width"] = w;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["width_trend"] = width_trend;
  j["max_width"] = max_width;
  return j;
}

InterfaceTrajectory interface_trajectory(const std::vector<ProfileSlice>& slices,
                                         const EntireSolution& uplus,
                                         const InterfaceConfig& config) {
  if (!(config.level_fraction > 0.0 && config.level_fraction < 1.0))
    throw DomainError("level fraction must lie in (0, 1)");
  InterfaceTrajectory out;
  std::vector<double> ts, Js, ws;
  for (const auto& slice : slices) {
    if (monotonicity_violation(slice.values) > config.monotone_tolerance)
      throw DomainError("profile at t = " + format_number(slice.t) + " is not monotone");
    const double ref = uplus(slice.t);
    InterfaceSample s;
    s.t = slice.t;
    s.J = crossing_from_left(slice, config.level_fraction * ref);
    s.width = interface_width(slice, ref, config.width_low, config.width_high);
    out.max_width = std::max(out.max_width, s.width);
    out.samples.push_back(s);
    ts.push_back(s.t);
    Js.push_back(s.J);
    ws.push_back(s.width);
  }
  if (ts.size() >= 2) {
    out.fit = linear_fit(ts, Js);
    out.width_trend = theil_sen_slope(ts, ws);
  }
  return out;
}

}  // namespace latkpp
