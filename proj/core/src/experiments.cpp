#include "latkpp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "latkpp/diagnostics.hpp"
#include "latkpp/errors.hpp"
#include "latkpp/fronts.hpp"
#include "latkpp/output.hpp"

namespace latkpp {

namespace {

std::size_t stride_for(double interval, double dt) {
  const auto steps = static_cast<std::size_t>(std::llround(interval / dt));
  return std::max<std::size_t>(steps, 1);
}

ProfileSlice slice_of(const LatticeState& state) {
  ProfileSlice slice;
  slice.t = state.t();
  slice.x0 = static_cast<double>(state.lo()) / state.subcells();
  slice.dx = 1.0 / state.subcells();
  slice.values.assign(state.values().begin(), state.values().end());
  return slice;
}

/// Linear interpolation of a sampled track at time t (clamped to the ends).
double track_at(const std::vector<double>& t, const std::vector<double>& y, double at) {
  if (at <= t.front()) return y.front();
  if (at >= t.back()) return y.back();
  const auto it = std::upper_bound(t.begin(), t.end(), at);
  const auto k = static_cast<std::size_t>(it - t.begin());
  const double w = (at - t[k - 1]) / (t[k] - t[k - 1]);
  return y[k - 1] + w * (y[k] - y[k - 1]);
}

nlohmann::json fit_json(const LinearFit& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"r_squared", fit.r_squared},
          {"points", fit.points}};
}

nlohmann::json flank_json(const FlankTrack& flank) {
  nlohmann::json j = fit_json(flank.fit);
  j["speed"] = flank.speed;
  j["samples"] = flank.t.size();
  return j;
}

void fit_flank(FlankTrack& flank, double t_from, double sign) {
  std::vector<double> ts, xs;
  for (std::size_t k = 0; k < flank.t.size(); ++k) {
    if (flank.t[k] >= t_from) {
      ts.push_back(flank.t[k]);
      xs.push_back(flank.position[k]);
    }
  }
  flank.fit = linear_fit(ts, xs);
  flank.speed = sign * flank.fit.slope;
}

/// Uniform double in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double SpikeDatum::operator()(std::int64_t i) const {
  return std::abs(i) <= support / 2 ? height : 0.0;
}

nlohmann::json SpeedMeasurement::to_json() const {
  return {{"datum_support", datum.support},
          {"datum_height", datum.height},
          {"level_fraction", level_fraction},
          {"left", flank_json(left)},
          {"right", flank_json(right)},
          {"window_min_slope", window_min_slope},
          {"window_max_slope", window_max_slope},
          {"averages", averages.to_json()},
          {"bounds", bounds.to_json()},
          {"lower_limit", lower_limit},
          {"upper_limit", upper_limit},
          {"fits_ok", fits_ok},
          {"verdict", verdict},
          {"run", run.to_json()}};
}

SpeedMeasurement measure_spreading_speed(const Reaction& reaction, const SpeedRunConfig& config) {
  if (!(config.duration > 0.0)) throw ValidationError("duration must be positive");
  if (!(config.level_fraction > 0.0 && config.level_fraction < 1.0))
    throw ValidationError("level fraction must lie in (0, 1)");
  if (config.datum.support < 1 || !(config.datum.height > 0.0))
    throw ValidationError("spike datum needs support >= 1 and height > 0");

  SpeedMeasurement out;
  out.datum = config.datum;
  out.level_fraction = config.level_fraction;
  out.averages = estimate_averages(reaction.forcing(), config.averages);
  out.bounds = speed_bounds(out.averages);

  const double reach = (out.bounds.c0_plus_tilde + 1.0) * config.duration;
  const double hw = static_cast<double>(config.half_width);
  if (reach + config.datum.support > hw) {
    throw MarginViolated("window +-" + std::to_string(config.half_width) +
                         " cannot hold a run of duration " + format_number(config.duration) +
                         " at speed c0_plus_tilde + 1");
  }

  const EntireSolution uplus = pullback_uplus(reaction, 0.0, config.duration, config.pullback);
  std::vector<double> init(static_cast<std::size_t>(2 * config.half_width + 1));
  for (std::size_t k = 0; k < init.size(); ++k) {
    init[k] = config.datum(static_cast<std::int64_t>(k) - config.half_width);
  }
  LatticeState state =
      LatticeState::lattice(-config.half_width, config.half_width, std::move(init), 0.0);

  IntegratorConfig ic;
  ic.dt = config.dt;
  ic.stride = stride_for(config.sample_interval, config.dt);
  Integrator integrator(reaction, ic);
  out.run = integrator.integrate(state, config.duration, [&](const LatticeState& s, std::size_t) {
    const ProfileSlice slice = slice_of(s);
    const double level = config.level_fraction * uplus(s.t());
    try {
      const double right = rightmost_crossing(slice, level);
      const double left = leftmost_crossing(slice, level);
      out.right.t.push_back(s.t());
      out.right.position.push_back(right);
      out.left.t.push_back(s.t());
      out.left.position.push_back(left);
    } catch (const NoCrossing&) {
      // level not attained yet (early decay of the spike)
    }
  });

  if (out.right.t.size() < 2) throw PoorFit("the level set was tracked at fewer than two times");
  const double edge = hw - config.margin;
  for (std::size_t k = 0; k < out.right.t.size(); ++k) {
    if (out.right.position[k] > edge || out.left.position[k] < -edge) {
      throw MarginViolated("front came within " + format_number(config.margin) +
                           " sites of the boundary at t = " + format_number(out.right.t[k]));
    }
  }

  const double t_from = 0.5 * config.duration;
  fit_flank(out.right, t_from, 1.0);
  fit_flank(out.left, t_from, -1.0);

  out.window_min_slope = std::numeric_limits<double>::infinity();
  out.window_max_slope = -std::numeric_limits<double>::infinity();
  const double T = config.duration;
  for (double fraction : config.trailing_fractions) {
    const double W = fraction * T;
    if (!(W > 0.0) || W > T) throw ValidationError("trailing fractions must lie in (0, 1]");
    const double r = (track_at(out.right.t, out.right.position, T) -
                      track_at(out.right.t, out.right.position, T - W)) / W;
    const double l = -(track_at(out.left.t, out.left.position, T) -
                       track_at(out.left.t, out.left.position, T - W)) / W;
    out.window_min_slope = std::min({out.window_min_slope, r, l});
    out.window_max_slope = std::max({out.window_max_slope, r, l});
  }

  out.lower_limit = out.bounds.c0_minus * (1.0 - config.tol_c);
  out.upper_limit = out.bounds.c0_plus * (1.0 + config.tol_c);
  out.fits_ok = out.right.fit.r_squared >= config.min_r_squared &&
                out.left.fit.r_squared >= config.min_r_squared;
  if (!out.fits_ok && config.strict) {
    throw PoorFit("flank regression R^2 = " + format_number(out.right.fit.r_squared) + " / " +
                  format_number(out.left.fit.r_squared) + " is below " +
                  format_number(config.min_r_squared));
  }
  const auto inside = [&](double c) {
    return std::isfinite(c) && c >= out.lower_limit && c <= out.upper_limit;
  };
  out.verdict = out.fits_ok && inside(out.left.speed) && inside(out.right.speed);
  return out;
}

nlohmann::json HairTriggerReport::to_json() const {
  return {{"gamma", gamma},
          {"c0_minus", c0_minus},
          {"precondition", precondition},
          {"max_deviation", max_deviation},
          {"pass", pass}};
}

HairTriggerReport hairtrigger_inside(const Reaction& reaction, double gamma,
                                     const HairTriggerConfig& config) {
  if (!(gamma >= 0.0)) throw DomainError("gamma must be >= 0");
  if (!(config.duration > 0.0)) throw ValidationError("duration must be positive");
  HairTriggerReport out;
  out.gamma = gamma;
  const SpeedBounds bounds = speed_bounds(estimate_averages(reaction.forcing(), config.averages));
  out.c0_minus = bounds.c0_minus;
  out.precondition = gamma < 0.9 * bounds.c0_minus;

  const EntireSolution uplus = pullback_uplus(reaction, 0.0, config.duration, config.pullback);
  std::vector<double> init(static_cast<std::size_t>(2 * config.half_width + 1));
  for (std::size_t k = 0; k < init.size(); ++k) {
    init[k] = config.datum(static_cast<std::int64_t>(k) - config.half_width);
  }
  LatticeState state =
      LatticeState::lattice(-config.half_width, config.half_width, std::move(init), 0.0);
  IntegratorConfig ic;
  ic.dt = config.dt;
  ic.stride = stride_for(config.sample_interval, config.dt);
  Integrator integrator(reaction, ic);
  const double from = 0.75 * config.duration;
  integrator.integrate(state, config.duration, [&](const LatticeState& s, std::size_t) {
    if (s.t() < from - 1e-9) return;
    const double ref = uplus(s.t());
    const auto reach = std::min<std::int64_t>(
        static_cast<std::int64_t>(std::floor(gamma * s.t())), config.half_width);
    for (std::int64_t i = -reach; i <= reach; ++i) {
      out.max_deviation = std::max(out.max_deviation, std::abs(s[s.index_of(i)] - ref));
    }
  });
  out.pass = out.max_deviation < config.threshold;
  return out;
}

nlohmann::json StabilityReport::to_json() const {
  nlohmann::json r = nlohmann::json::array();
  for (const auto& run : runs) {
    r.push_back({{"s", run.s},
                 {"member", run.member},
                 {"distance", run.distance},
                 {"decay_rate", run.decay_rate}});
  }
  return {{"runs", r},
          {"sup_distance", sup_distance},
          {"min_decay_rate", min_decay_rate},
          {"pass", pass},
          {"uplus", uplus}};
}

StabilityReport stability_experiment(const Reaction& reaction, const StabilityConfig& config) {
  if (config.start_times.empty()) throw ValidationError("stability needs at least one start time");
  if (!(config.low > 0.0 && config.low <= config.high))
    throw ValidationError("ensemble bounds must satisfy 0 < low <= high");
  if (!(config.duration > 0.0)) throw ValidationError("duration must be positive");
  const auto [s_min, s_max] =
      std::minmax_element(config.start_times.begin(), config.start_times.end());
  const EntireSolution uplus =
      pullback_uplus(reaction, *s_min, *s_max + config.duration, config.pullback);

  StabilityReport out;
  out.uplus = uplus.summary();
  out.min_decay_rate = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(config.seed);
  const std::size_t sites = static_cast<std::size_t>(2 * config.half_width + 1);
  IntegratorConfig ic;
  ic.dt = config.dt;
  ic.stride = stride_for(1.0, config.dt);
  for (double s : config.start_times) {
    for (std::size_t m = 0; m < config.members; ++m) {
      std::vector<double> init(sites);
      for (double& v : init) v = config.low + (config.high - config.low) * unit_uniform(rng);
      LatticeState state =
          LatticeState::lattice(-config.half_width, config.half_width, std::move(init), s);
      Integrator integrator(reaction, ic);
      std::vector<double> ts, logs;
      double last = 0.0;
      integrator.integrate(state, s + config.duration, [&](const LatticeState& st, std::size_t) {
        const double ref = uplus(st.t());
        double d = 0.0;
        for (double v : st.values()) d = std::max(d, std::abs(v - ref));
        last = d;
        if (d > 1e-13) {
          ts.push_back(st.t());
          logs.push_back(std::log(d));
        }
      });
      StabilityRun run{s, m, last, 0.0};
      if (ts.size() >= 2) {
        run.decay_rate = -linear_fit(ts, logs).slope;
        out.min_decay_rate = std::min(out.min_decay_rate, run.decay_rate);
      }
      out.sup_distance = std::max(out.sup_distance, last);
      out.runs.push_back(run);
    }
  }
  if (!std::isfinite(out.min_decay_rate)) out.min_decay_rate = 0.0;
  out.pass = out.sup_distance <= config.threshold && uplus.monotone_in_depth() &&
             uplus.ladder_disagreement() <= config.pullback.agreement_tol;
  return out;
}

double homogeneous_distance(const Reaction& reaction, double value, double s, double t,
                            const EntireSolution& uplus, double dt) {
  LatticeState state = LatticeState::lattice(0, 4, std::vector<double>(5, value), s);
  IntegratorConfig ic;
  ic.dt = dt;
  Integrator(reaction, ic).integrate(state, s + t);
  const double ref = uplus(s + t);
  double d = 0.0;
  for (double v : state.values()) d = std::max(d, std::abs(v - ref));
  return d;
}

nlohmann::json CriticalFrontReport::to_json() const {
  return {{"mu_star", mu_star},
          {"c0_minus_tilde", c0_minus_tilde},
          {"t", t},
          {"J", J},
          {"windows", windows},
          {"window_min_speed", window_min_speed},
          {"liminf_estimate", liminf_estimate},
          {"max_monotone_violation", max_monotone_violation},
          {"converged", converged},
          {"pass", pass}};
}

CriticalFrontReport critical_front_run(const Reaction& reaction, const CriticalConfig& config) {
  if (!(config.duration > 0.0)) throw ValidationError("duration must be positive");
  const AverageReport averages = estimate_averages(reaction.forcing(), config.averages);
  const SpeedBounds bounds = speed_bounds(averages);
  CriticalFrontReport out;
  out.mu_star = bounds.mu_star;
  out.c0_minus_tilde = bounds.c0_minus_tilde;

  const std::int64_t right =
      config.right != 0
          ? config.right
          : static_cast<std::int64_t>(std::ceil(bounds.c0_plus_tilde * config.duration + 150.0));
  if (right - config.left < 4) throw ValidationError("critical window is too small");
  const double M0 = reaction.M0();
  std::vector<double> init(static_cast<std::size_t>(right - config.left + 1));
  for (std::size_t k = 0; k < init.size(); ++k) {
    const double i = static_cast<double>(config.left + static_cast<std::int64_t>(k));
    init[k] = std::min(std::exp(-out.mu_star * i), M0);
  }
  const EntireSolution uplus = pullback_uplus(reaction, 0.0, config.duration, config.pullback);
  LatticeState state = LatticeState::lattice(config.left, right, std::move(init), 0.0);
  IntegratorConfig ic;
  ic.dt = config.dt;
  ic.stride = stride_for(config.sample_interval, config.dt);
  Integrator integrator(reaction, ic);
  const double edge = static_cast<double>(right) - config.margin;
  integrator.integrate(state, config.duration, [&](const LatticeState& s, std::size_t) {
    const ProfileSlice slice = slice_of(s);
    out.max_monotone_violation =
        std::max(out.max_monotone_violation, monotonicity_violation(slice.values));
    const double J = crossing_from_left(slice, 0.5 * uplus(s.t()));
    if (J > edge) {
      throw MarginViolated("critical front came within " + format_number(config.margin) +
                           " sites of the right boundary at t = " + format_number(s.t()));
    }
    out.t.push_back(s.t());
    out.J.push_back(J);
  });

  const double burn_in = config.burn_in_fraction * config.duration;
  out.liminf_estimate = std::numeric_limits<double>::infinity();
  for (double W : config.windows) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < out.t.size(); ++k) {
      const double s = out.t[k];
      if (s < burn_in - 1e-9 || s + W > config.duration + 1e-9) continue;
      const double speed = (track_at(out.t, out.J, s + W) - out.J[k]) / W;
      worst = std::min(worst, speed);
    }
    if (!std::isfinite(worst)) continue;
    out.windows.push_back(W);
    out.window_min_speed.push_back(worst);
    out.liminf_estimate = std::min(out.liminf_estimate, worst);
  }
  if (out.windows.empty()) throw ValidationError("no speed window fits after the burn-in");
  const std::size_t n = out.window_min_speed.size();
  out.converged = n >= 2 && std::abs(out.window_min_speed[n - 1] - out.window_min_speed[n - 2]) <=
                                1e-2 * std::abs(out.window_min_speed[n - 1]);
  out.pass = std::abs(out.liminf_estimate - out.c0_minus_tilde) <=
                 config.tolerance * out.c0_minus_tilde &&
             out.max_monotone_violation <= config.monotone_tolerance;
  return out;
}

nlohmann::json BracketReport::to_json() const {
  nlohmann::json e = nlohmann::json::array();
  for (const auto& entry : entries) {
    e.push_back({{"gamma", entry.gamma},
                 {"mu", entry.mu},
                 {"frame_speed", entry.frame_speed},
                 {"precondition", entry.precondition},
                 {"worst_excess", entry.worst_excess},
                 {"dominated", entry.dominated}});
  }
  return {{"c0_minus_tilde", c0_minus_tilde},
          {"entries", e},
          {"certified_bound", certified_bound},
          {"decreasing", decreasing},
          {"within_tolerance", within_tolerance}};
}

BracketReport tilde_cstar_bracket(const Reaction& reaction, const BracketConfig& config) {
  if (config.offsets.empty()) throw ValidationError("bracket needs at least one offset");
  const AverageReport averages = estimate_averages(reaction.forcing(), config.averages);
  const SpeedBounds bounds = speed_bounds(averages);
  BracketReport out;
  out.c0_minus_tilde = bounds.c0_minus_tilde;

  SuperConfig sc;
  sc.range = {0.0, config.duration};
  sc.pullback = config.pullback;
  sc.averages = config.averages;
  IntegratorConfig ic;
  ic.dt = config.dt;
  ic.stride = stride_for(config.sample_interval, config.dt);
  const auto sites = static_cast<std::size_t>(2 * config.half_width + 1);

  std::vector<double> offsets = config.offsets;
  std::sort(offsets.begin(), offsets.end());
  for (double offset : offsets) {
    BracketEntry entry;
    entry.gamma = bounds.c0_minus_tilde + offset;
    entry.mu = root_pair(entry.gamma, averages.fbar_inf).mu_low;
    entry.frame_speed = (dispersion_numerator(entry.mu) + averages.fbar_inf) / entry.mu;
    const SuperSolution sup = build_supersolution(reaction, entry.mu, sc);

    std::vector<double> init(sites);
    entry.precondition = true;
    for (std::size_t k = 0; k < sites; ++k) {
      const auto i = static_cast<std::int64_t>(k) - config.half_width;
      init[k] = config.datum(i);
      if (init[k] > sup.lab(static_cast<double>(i), 0.0)) entry.precondition = false;
    }
    if (entry.precondition) {
      LatticeState state = LatticeState::lattice(-config.half_width, config.half_width,
                                                 std::move(init), 0.0);
      entry.worst_excess = -std::numeric_limits<double>::infinity();
      Integrator integrator(reaction, ic);
      integrator.integrate(state, config.duration, [&](const LatticeState& s, std::size_t) {
        for (std::size_t k = 0; k < s.size(); ++k) {
          entry.worst_excess = std::max(entry.worst_excess, s[k] - sup.lab(s.x(k), s.t()));
        }
      });
      entry.dominated = entry.worst_excess <= config.order_tolerance;
    }
    out.entries.push_back(entry);
  }

  out.certified_bound = std::numeric_limits<double>::infinity();
  out.decreasing = true;
  double previous = -std::numeric_limits<double>::infinity();
  for (const auto& entry : out.entries) {
    if (!entry.dominated) {
      out.decreasing = false;
      continue;
    }
    if (!(entry.frame_speed > previous)) out.decreasing = false;
    previous = entry.frame_speed;
    out.certified_bound = std::min(out.certified_bound, entry.frame_speed);
  }
  out.within_tolerance =
      std::isfinite(out.certified_bound) &&
      out.certified_bound - out.c0_minus_tilde <=
          offsets.front() + config.tolerance * out.c0_minus_tilde + kDispersionTolerance;
  return out;
}

ReflectionReport reflection_check(const Reaction& reaction, const std::vector<double>& datum,
                                  double duration, double dt) {
  if (datum.size() < 5) throw ValidationError("reflection check needs at least 5 sites");
  const auto hi = static_cast<std::int64_t>(datum.size()) - 1;
  std::vector<double> reflected(datum.rbegin(), datum.rend());
  LatticeState a = LatticeState::lattice(0, hi, datum, 0.0);
  LatticeState b = LatticeState::lattice(0, hi, std::move(reflected), 0.0);
  IntegratorConfig ic;
  ic.dt = dt;
  Integrator(reaction, ic).integrate(a, duration);
  Integrator(reaction, ic).integrate(b, duration);
  ReflectionReport out;
  out.bitwise = true;
  const std::size_t n = datum.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double u = a[k];
    const double w = b[n - 1 - k];
    out.max_difference = std::max(out.max_difference, std::abs(u - w));
    if (u != w) out.bitwise = false;
  }
  return out;
}

}  // namespace latkpp
