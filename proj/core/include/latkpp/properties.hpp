#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latkpp/reaction.hpp"

namespace latkpp {

struct PropertyConfig {
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::int64_t half_width = 20;
  double duration = 2.0;
  double dt = 0.01;
  double sample_interval = 0.1;
  /// Comparison: v - u <= order_tolerance at every output.
  double order_tolerance = 1e-10;
  /// Part metric: rho(t_k+1) - rho(t_k) <= metric_tolerance.
  double metric_tolerance = 1e-9;
  /// Contraction box [epsilon, upper] and the least admissible drop over unit time.
  double epsilon = 0.2;
  double upper = 3.0;
  double rho_min = 0.1;
  double delta = 1e-3;
  /// Strict separation is checked once t - s >= separation_time.
  double separation_time = 0.1;
  double zero_tolerance = 1e-12;
  double homogeneity_tolerance = 1e-12;
};

struct PropertyResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  /// Most adverse value of the checked statistic over all trials.
  double worst = 0.0;
  std::string worst_trial;

  bool pass() const { return trials > 0 && violations == 0; }
  nlohmann::json to_json() const;
};

/// Random reaction drawn from every forcing family (constant, periodic,
/// quasiperiodic, switching) with logistic or saturating shape.
Reaction random_reaction(std::mt19937_64& rng);
/// Independent generator for trial `trial` of suite `suite`.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t suite, std::uint64_t trial);

/// Ordered pairs v <= u stay ordered; worst = max over outputs of v - u.
PropertyResult comparison_suite(const PropertyConfig& config = {});
/// v <= u with v != u gives u > v on the interior once t - s >= 0.1; worst = min gap.
PropertyResult strict_separation_suite(const PropertyConfig& config = {});
/// rho is nonincreasing along outputs; worst = largest increase.
PropertyResult part_metric_suite(const PropertyConfig& config = {});
/// rho(s) - rho(s + 1) >= delta for data in [epsilon, upper] with rho(s) >= rho_min;
/// worst = least drop.
PropertyResult contraction_suite(const PropertyConfig& config = {});
/// A single crossing never becomes more than one; worst = largest count.
PropertyResult single_crossing_suite(const PropertyConfig& config = {});
/// Constant data stay constant; worst = largest max - min.
PropertyResult homogeneity_suite(const PropertyConfig& config = {});

std::vector<PropertyResult> run_property_suites(const PropertyConfig& config = {});

}  // namespace latkpp
