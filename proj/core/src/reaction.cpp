#include "latkpp/reaction.hpp"

#include <algorithm>
#include <limits>

#include "latkpp/errors.hpp"

namespace latkpp {

namespace {

constexpr double kMarginTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate_shape(const Shape& shape) {
  std::visit(Overloaded{
                 [](const LinearShape& s) {
                   if (!(s.slope > 0.0)) throw ValidationError("slope must be positive");
                 },
                 [](const QuadraticShape& s) {
                   if (!(s.a > 0.0)) throw ValidationError("quadratic a must be positive");
                   if (!(s.b >= 0.0)) throw ValidationError("quadratic b must be nonnegative");
                 },
                 [](const SaturatingShape& s) {
                   if (!(s.m > 0.0)) throw ValidationError("saturating m must be positive");
                   if (!(s.M >= s.m)) throw ValidationError("saturating M must be >= m");
                 },
             },
             shape);
}

}  // namespace

Reaction::Reaction(Forcing forcing, Shape shape, double M0, double m_tilde, double M_tilde)
    : forcing_(std::move(forcing)),
      shape_(shape),
      M0_(M0),
      m_tilde_(m_tilde),
      M_tilde_(M_tilde) {
  validate_shape(shape_);
  if (!(M0_ > 0.0) || !std::isfinite(M0_)) throw ValidationError("M0 must be positive");
  if (!(m_tilde_ > 0.0)) throw ValidationError("m_tilde must be positive");
  if (!(M_tilde_ >= m_tilde_) || !std::isfinite(M_tilde_))
    throw ValidationError("M_tilde must be finite and >= m_tilde");
}

Reaction Reaction::logistic(Forcing forcing, double slope) {
  if (!(slope > 0.0)) throw ValidationError("slope must be positive");
  double sup_r = forcing.upper_bound();
  if (!(sup_r > 0.0)) throw ValidationError("sup r must be positive for a logistic reaction");
  return Reaction(std::move(forcing), LinearShape{slope}, sup_r / slope, slope, slope);
}

Reaction Reaction::with_shape(Forcing forcing, Shape shape) {
  validate_shape(shape);
  double sup_r = forcing.upper_bound();
  if (!(sup_r > 0.0)) throw ValidationError("sup r must be positive");
  auto g = [&shape](double u) { return std::visit([u](const auto& s) { return s.g(u); }, shape); };
  auto gp = [&shape](double u) {
    return std::visit([u](const auto& s) { return s.g_prime(u); }, shape);
  };
  // g is increasing and unbounded, so g(u) = sup r has a unique root.
  double lo = 0.0, hi = 1.0;
  while (g(hi) < sup_r) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < sup_r ? lo : hi) = mid;
  }
  double M0 = hi;
  double m = std::numeric_limits<double>::infinity(), M = 0.0;
  for (int k = 0; k <= 1024; ++k) {
    double v = gp(4.0 * M0 * k / 1024.0);
    m = std::min(m, v);
    M = std::max(M, v);
  }
  return Reaction(std::move(forcing), shape, M0, m, M);
}

Reaction Reaction::linearized(double K) const {
  return Reaction(forcing_, LinearShape{K}, forcing_.upper_bound() / K, K, K);
}

std::string Reaction::shape_name() const {
  return std::visit(Overloaded{
                        [](const LinearShape&) { return std::string("linear"); },
                        [](const QuadraticShape&) { return std::string("quadratic"); },
                        [](const SaturatingShape&) { return std::string("saturating"); },
                    },
                    shape_);
}

nlohmann::json Reaction::to_json() const {
  nlohmann::json j;
  j["forcing"] = forcing_.to_json();
  j["shape"] = shape_name();
  std::visit(Overloaded{
                 [&j](const LinearShape& s) { j["slope"] = s.slope; },
                 [&j](const QuadraticShape& s) {
                   j["a"] = s.a;
                   j["b"] = s.b;
                 },
                 [&j](const SaturatingShape& s) {
                   j["m"] = s.m;
                   j["M"] = s.M;
                 },
             },
             shape_);
  j["M0"] = M0_;
  j["m_tilde"] = m_tilde_;
  j["M_tilde"] = M_tilde_;
  return j;
}

nlohmann::json HypothesisReport::to_json() const {
  return {{"h0_pass", h0_pass},
          {"h0_note", h0_note},
          {"h1_pass", h1_pass},
          {"h1_margin", h1_margin},
          {"monotone_pass", monotone_pass},
          {"monotone_margin", monotone_margin},
          {"h2_pass", h2_pass},
          {"h2_upper_margin", h2_upper_margin},
          {"h2_lower_margin", h2_lower_margin},
          {"mean_pass", mean_pass},
          {"mean_value", mean_value},
          {"all_pass", all_pass()}};
}

HypothesisGrid HypothesisGrid::defaults(const Reaction& reaction, double horizon) {
  HypothesisGrid grid;
  constexpr int n = 256;
  for (int k = 0; k < n; ++k) {
    grid.t.push_back(horizon * k / (n - 1));
    grid.u.push_back(4.0 * reaction.M0() * k / (n - 1));
  }
  return grid;
}

HypothesisReport check_hypotheses(const Reaction& reaction, const HypothesisGrid& grid,
                                  const AverageConfig& averages) {
  if (grid.t.empty() || grid.u.empty()) throw DomainError("hypothesis grids must be nonempty");
  const double M0 = reaction.M0();
  for (double u : grid.u) {
    if (u < 0.0 || u > 4.0 * M0 * (1.0 + 1e-12))
      throw DomainError("u-grid must lie in [0, 4*M0]");
  }
  std::vector<double> us = grid.u;
  std::sort(us.begin(), us.end());

  HypothesisReport report;
  if (reaction.forcing().is_piecewise()) {
    report.h0_pass = false;
    report.h0_note = "not satisfied - piecewise";
  } else {
    report.h0_pass = true;
    report.h0_note = "smooth forcing";
  }

  const double inf = std::numeric_limits<double>::infinity();
  double h1_margin = -inf;
  bool h1_ok = true;
  double mono = -inf;
  double upper = inf, lower = inf;
  const double m = reaction.m_tilde(), M = reaction.M_tilde();
  for (double t : grid.t) {
    const double f0 = reaction(t, 0.0);
    double previous = 0.0;
    for (std::size_t k = 0; k < us.size(); ++k) {
      const double u = us[k];
      const double f = reaction(t, u);
      if (u >= M0) {
        h1_margin = std::max(h1_margin, f);
        if (u > M0 ? !(f < 0.0) : !(f <= kMarginTolerance)) h1_ok = false;
      }
      if (k > 0 && u > us[k - 1]) mono = std::max(mono, f - previous);
      previous = f;
      upper = std::min(upper, f0 - m * u - f);
      lower = std::min(lower, f - f0 + M * u);
    }
  }
  report.h1_margin = h1_margin == -inf ? 0.0 : h1_margin;
  report.h1_pass = h1_ok;
  report.monotone_margin = mono == -inf ? 0.0 : mono;
  report.monotone_pass = mono == -inf || mono < 0.0;
  report.h2_upper_margin = upper;
  report.h2_lower_margin = lower;
  report.h2_pass = upper >= -kMarginTolerance && lower >= -kMarginTolerance;

  report.mean_value = estimate_averages(reaction.forcing(), averages).fbar_inf;
  report.mean_pass = report.mean_value > 1e-9;
  return report;
}

}  // namespace latkpp
