#include "latkpp/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "latkpp/errors.hpp"

namespace latkpp {

double part_metric(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DomainError("part metric needs equal-length states");
  double rho = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0) || !(v[i] > 0.0)) {
      throw Undefined("part metric is undefined for non-positive entries (index " +
                      std::to_string(i) + ")");
    }
    rho = std::max(rho, std::abs(std::log(u[i]) - std::log(v[i])));
  }
  return rho;
}

SignChangeProfile sign_change_profile(std::span<const double> u, std::span<const double> v,
                                      double zero_tolerance, std::int64_t first_index) {
  if (u.size() != v.size()) throw DomainError("sign-change profile needs equal-length states");
  SignChangeProfile profile;
  int last_sign = 0;
  int first_sign = 0;
  std::optional<std::size_t> first_negative;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double d = u[j] - v[j];
    int sign = d > zero_tolerance ? 1 : (d < -zero_tolerance ? -1 : 0);
    if (sign == 0) continue;
    if (first_sign == 0) first_sign = sign;
    if (sign < 0 && !first_negative) first_negative = j;
    if (last_sign != 0 && sign != last_sign) ++profile.count;
    last_sign = sign;
  }
  if (profile.count == 0) {
    profile.j_t = first_sign < 0 ? CrossingIndex::minus_infinity() : CrossingIndex::plus_infinity();
  } else if (profile.count == 1 && first_sign > 0) {
    profile.j_t =
        CrossingIndex::finite(first_index + static_cast<std::int64_t>(*first_negative) - 1);
  }
  return profile;
}

ContinuityProbe probe_continuity(const Reaction& reaction,
                                 const std::vector<LatticeState>& sequence,
                                 const LatticeState& limit, double t, std::int64_t probe_lo,
                                 std::int64_t probe_hi, const IntegratorConfig& config) {
  if (probe_lo > probe_hi || probe_lo < limit.lo() || probe_hi > limit.hi())
    throw DomainError("probe window must lie inside the state window");
  double range = std::max(reaction.M0(), limit.sup());
  for (const auto& s : sequence) {
    if (s.lo() != limit.lo() || s.hi() != limit.hi() || s.subcells() != limit.subcells())
      throw DomainError("probe data must share the limit's window");
    range = std::max(range, s.sup());
  }
  ContinuityProbe probe;
  const double sup_f = reaction.forcing().sup_abs() + reaction.M_tilde() * range;
  probe.growth_constant = 2.0 + sup_f + reaction.M_tilde() * range;

  Integrator integrator(reaction, config);
  LatticeState reference = limit;
  integrator.integrate(reference, limit.t() + t);
  const std::size_t a = limit.index_of(probe_lo), b = limit.index_of(probe_hi);
  for (const auto& datum : sequence) {
    double initial_probe = 0.0, initial_all = 0.0;
    for (std::size_t k = 0; k < datum.size(); ++k) {
      double d = std::abs(datum[k] - limit[k]);
      initial_all = std::max(initial_all, d);
      if (k >= a && k <= b) initial_probe = std::max(initial_probe, d);
    }
    LatticeState evolved = datum;
    integrator.integrate(evolved, datum.t() + t);
    double deviation = 0.0;
    for (std::size_t k = a; k <= b; ++k) {
      deviation = std::max(deviation, std::abs(evolved[k] - reference[k]));
    }
    double bound = std::exp(probe.growth_constant * t) * initial_all;
    probe.initial_deviations.push_back(initial_probe);
    probe.deviations.push_back(deviation);
    probe.gronwall_bounds.push_back(bound);
    if (deviation > bound * (1.0 + 1e-9) + 1e-14) probe.within_gronwall = false;
  }
  return probe;
}

}  // namespace latkpp
