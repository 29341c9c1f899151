#include "latkpp/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latkpp/diagnostics.hpp"
#include "latkpp/errors.hpp"
#include "latkpp/lattice.hpp"
#include "latkpp/output.hpp"

namespace latkpp {

namespace {

using Snapshots = std::vector<std::vector<double>>;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = uniform(rng, lo, hi);
  return v;
}

std::size_t site_count(const PropertyConfig& config) {
  return static_cast<std::size_t>(2 * config.half_width + 1);
}

/// Outputs at every sample interval, including t = 0.
Snapshots evolve(const Reaction& reaction, std::vector<double> datum, const PropertyConfig& config,
                 std::vector<double>* times = nullptr) {
  LatticeState state =
      LatticeState::lattice(-config.half_width, config.half_width, std::move(datum), 0.0);
  IntegratorConfig ic;
  ic.dt = config.dt;
  ic.stride = std::max<std::size_t>(
      static_cast<std::size_t>(std::llround(config.sample_interval / config.dt)), 1);
  Snapshots out;
  Integrator(reaction, ic).integrate(state, config.duration,
                                     [&](const LatticeState& s, std::size_t) {
                                       out.emplace_back(s.values().begin(), s.values().end());
                                       if (times) times->push_back(s.t());
                                     });
  return out;
}

std::string trial_label(std::size_t trial, const Reaction& reaction) {
  return "trial " + std::to_string(trial) + " (" + reaction.forcing().name() + ", " +
         reaction.shape_name() + ")";
}

template <class Trial>
PropertyResult run_suite(const std::string& name, std::uint64_t suite,
                         const PropertyConfig& config, bool maximize, Trial&& trial) {
  PropertyResult result;
  result.name = name;
  result.worst = maximize ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < config.trials; ++k) {
    std::mt19937_64 rng = trial_rng(config.seed, suite, k);
    const Reaction reaction = random_reaction(rng);
    const auto [value, violated] = trial(rng, reaction);
    ++result.trials;
    if (violated) ++result.violations;
    if (maximize ? value > result.worst : value < result.worst) {
      result.worst = value;
      result.worst_trial = trial_label(k, reaction);
    }
  }
  return result;
}

struct Outcome {
  double value;
  bool violated;
};

}  // namespace

nlohmann::json PropertyResult::to_json() const {
  return {{"name", name},
          {"trials", trials},
          {"violations", violations},
          {"worst", worst},
          {"worst_trial", worst_trial},
          {"pass", pass()}};
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t suite, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

Reaction random_reaction(std::mt19937_64& rng) {
  Forcing forcing;
  switch (rng() % 4) {
    case 0:
      forcing = Forcing::constant(uniform(rng, 0.5, 1.5));
      break;
    case 1:
      forcing = Forcing::periodic(1.0, uniform(rng, 0.0, 0.8), uniform(rng, 0.5, 2.0),
                                  uniform(rng, 0.0, 6.283185307179586));
      break;
    case 2:
      forcing = Forcing::quasiperiodic(
          1.0, {{uniform(rng, 0.0, 0.3), uniform(rng, 0.5, 1.5)},
                {uniform(rng, 0.0, 0.3), uniform(rng, 0.5, 1.5) * 1.4142135623730951}});
      break;
    default:
      forcing = Forcing::switching({uniform(rng, 0.5, 1.0), uniform(rng, 1.0, 1.5)},
                                   uniform(rng, 0.5, 2.0), rng());
      break;
  }
  if (rng() % 3 == 0) {
    const double m = uniform(rng, 0.5, 1.0);
    return Reaction::with_shape(forcing, SaturatingShape{m, m + uniform(rng, 0.0, 1.0)});
  }
  return Reaction::logistic(forcing, uniform(rng, 0.5, 1.5));
}

PropertyResult comparison_suite(const PropertyConfig& config) {
  const std::size_t n = site_count(config);
  return run_suite("comparison", 1, config, true, [&](std::mt19937_64& rng, const Reaction& r) {
    std::vector<double> u = random_vector(rng, n, 0.0, 2.0);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i] * uniform(rng, 0.0, 1.0);
    const Snapshots su = evolve(r, u, config), sv = evolve(r, v, config);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < su.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, sv[k][i] - su[k][i]);
    }
    return Outcome{worst, worst > config.order_tolerance};
  });
}

PropertyResult strict_separation_suite(const PropertyConfig& config) {
  const std::size_t n = site_count(config);
  return run_suite("strict_separation", 2, config, false,
                   [&](std::mt19937_64& rng, const Reaction& r) {
                     std::vector<double> u = random_vector(rng, n, 0.1, 2.0);
                     std::vector<double> v = u;
                     // At most kMaxRun consecutive sites keep v = u.
                     constexpr std::size_t kMaxRun = 4;
                     std::size_t run = 0;
                     for (std::size_t i = 0; i < n; ++i) {
                       if (rng() % 2 == 0 || run == kMaxRun) {
                         v[i] = u[i] * (1.0 - uniform(rng, 0.05, 0.5));
                         run = 0;
                       } else {
                         ++run;
                       }
                     }
                     std::vector<double> times;
                     const Snapshots su = evolve(r, u, config, &times), sv = evolve(r, v, config);
                     double gap = std::numeric_limits<double>::infinity();
                     for (std::size_t k = 0; k < su.size(); ++k) {
                       if (times[k] < config.separation_time - 1e-9) continue;
                       for (std::size_t i = 1; i + 1 < n; ++i) {
                         gap = std::min(gap, su[k][i] - sv[k][i]);
                       }
                     }
                     return Outcome{gap, !(gap > 0.0)};
                   });
}

PropertyResult part_metric_suite(const PropertyConfig& config) {
  const std::size_t n = site_count(config);
  return run_suite("part_metric_monotone", 3, config, true,
                   [&](std::mt19937_64& rng, const Reaction& r) {
                     const Snapshots su =
                         evolve(r, random_vector(rng, n, config.epsilon, config.upper), config);
                     const Snapshots sv =
                         evolve(r, random_vector(rng, n, config.epsilon, config.upper), config);
                     double worst = -std::numeric_limits<double>::infinity();
                     double previous = part_metric(su[0], sv[0]);
                     for (std::size_t k = 1; k < su.size(); ++k) {
                       const double rho = part_metric(su[k], sv[k]);
                       worst = std::max(worst, rho - previous);
                       previous = rho;
                     }
                     return Outcome{worst, worst > config.metric_tolerance};
                   });
}

PropertyResult contraction_suite(const PropertyConfig& config) {
  const std::size_t n = site_count(config);
  PropertyConfig unit = config;
  unit.duration = 1.0;
  unit.sample_interval = 1.0;
  return run_suite(
      "uniform_contraction", 4, config, false, [&](std::mt19937_64& rng, const Reaction& r) {
        const double rho0 = uniform(rng, config.rho_min, 5.0 * config.rho_min);
        std::vector<double> u = random_vector(rng, n, config.epsilon * std::exp(rho0),
                                              config.upper * std::exp(-rho0));
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = u[i] * std::exp(rho0 * uniform(rng, -1.0, 1.0));
        v[n / 2] = u[n / 2] * std::exp(rho0);
        const Snapshots su = evolve(r, u, unit), sv = evolve(r, v, unit);
        const double drop = part_metric(su.front(), sv.front()) - part_metric(su.back(), sv.back());
        return Outcome{drop, drop < config.delta};
      });
}

PropertyResult single_crossing_suite(const PropertyConfig& config) {
  const std::size_t n = site_count(config);
  return run_suite("single_crossing", 5, config, true,
                   [&](std::mt19937_64& rng, const Reaction& r) {
                     std::vector<double> u = random_vector(rng, n, 0.2, 2.0);
                     std::vector<double> v(n);
                     const std::size_t j0 = 1 + rng() % (n - 2);
                     for (std::size_t i = 0; i < n; ++i) {
                       const double d = uniform(rng, 0.01, 0.19);
                       v[i] = i <= j0 ? u[i] - d : u[i] + d;
                     }
                     const Snapshots su = evolve(r, u, config), sv = evolve(r, v, config);
                     double worst = 0.0;
                     for (std::size_t k = 0; k < su.size(); ++k) {
                       const auto profile = sign_change_profile(su[k], sv[k], config.zero_tolerance);
                       worst = std::max(worst, static_cast<double>(profile.count));
                     }
                     return Outcome{worst, worst > 1.0};
                   });
}

PropertyResult homogeneity_suite(const PropertyConfig& config) {
  const std::size_t n = site_count(config);
  return run_suite("homogeneity", 6, config, true, [&](std::mt19937_64& rng, const Reaction& r) {
    const Snapshots s = evolve(r, std::vector<double>(n, uniform(rng, 0.0, 3.0)), config);
    double worst = 0.0;
    for (const auto& values : s) {
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      worst = std::max(worst, *hi - *lo);
    }
    return Outcome{worst, worst > config.homogeneity_tolerance};
  });
}

std::vector<PropertyResult> run_property_suites(const PropertyConfig& config) {
  return {comparison_suite(config),    strict_separation_suite(config),
          part_metric_suite(config),   contraction_suite(config),
          single_crossing_suite(config), homogeneity_suite(config)};
}

}  // namespace latkpp
