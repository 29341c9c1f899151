#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "latkpp/lattice.hpp"

namespace latkpp {

/// sup_i |ln u_i - ln v_i|
double part_metric(std::span<const double> u, std::span<const double> v);

struct CrossingIndex {
  enum class Kind { finite, plus_infinity, minus_infinity };
  Kind kind = Kind::finite;
  std::int64_t index = 0;

  static CrossingIndex finite(std::int64_t i) { return {Kind::finite, i}; }
  static CrossingIndex plus_infinity() { return {Kind::plus_infinity, 0}; }
  static CrossingIndex minus_infinity() { return {Kind::minus_infinity, 0}; }
  bool operator==(const CrossingIndex&) const = default;
};

struct SignChangeProfile {
  std::size_t count = 0;
  /// Set when u - v is (weakly) positive up to j_t and (weakly) negative after.
  std::optional<CrossingIndex> j_t;
};

/// Counts strict sign changes of u_j - v_j, treating |u_j - v_j| <= zero_tolerance
/// as zero. Indices are reported as `first_index + j`.
SignChangeProfile sign_change_profile(std::span<const double> u, std::span<const double> v,
                                      double zero_tolerance = 0.0,
                                      std::int64_t first_index = 0);

struct ContinuityProbe {
  /// sup over the probe window of |u0_n - u0_limit|
  std::vector<double> initial_deviations;
  /// sup over the probe window of |u(t; u0_n) - u(t; u0_limit)|
  std::vector<double> deviations;
  /// e^{C t} * sup over the whole window of |u0_n - u0_limit|
  std::vector<double> gronwall_bounds;
  double growth_constant = 0.0;
  bool within_gronwall = true;
};

/// Integrates each datum and the limit datum to time t and measures their
/// deviation on the sites probe_lo..probe_hi.
ContinuityProbe probe_continuity(const Reaction& reaction,
                                 const std::vector<LatticeState>& sequence,
                                 const LatticeState& limit, double t, std::int64_t probe_lo,
                                 std::int64_t probe_hi, const IntegratorConfig& config = {});

}  // namespace latkpp
