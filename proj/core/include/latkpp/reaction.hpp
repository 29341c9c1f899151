#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "latkpp/forcing.hpp"

namespace latkpp {

/// g(u) = slope * u
struct LinearShape {
  double slope = 1.0;
  double g(double u) const { return slope * u; }
  double g_prime(double) const { return slope; }
};

/// g(u) = a*u + b*u^2
struct QuadraticShape {
  double a = 1.0;
  double b = 0.0;
  double g(double u) const { return u * (a + b * u); }
  double g_prime(double u) const { return a + 2.0 * b * u; }
};

/// g(u) = m*u + (M - m)*(1 - exp(-u)), so g' decreases from M to m.
struct SaturatingShape {
  double m = 1.0;
  double M = 1.0;
  double g(double u) const { return m * u - (M - m) * std::expm1(-u); }
  double g_prime(double u) const { return m + (M - m) * std::exp(-u); }
};

using Shape = std::variant<LinearShape, QuadraticShape, SaturatingShape>;

/// f(t, u) = r(t) - g(u) for u >= 0 and f(t, u) = r(t) for u < 0.
class Reaction {
 public:
  Reaction() : Reaction(Forcing::constant(1.0), LinearShape{}, 1.0, 1.0, 1.0) {}
  Reaction(Forcing forcing, Shape shape, double M0, double m_tilde, double M_tilde);

  /// f(t,u) = r(t) - slope*u with M0 = sup r / slope and m~0 = M~0 = slope.
  static Reaction logistic(Forcing forcing, double slope = 1.0);

  /// Fills M0 with the root of g(u) = sup r and m~0, M~0 with the extremes of
  /// g' on [0, 4*M0].
  static Reaction with_shape(Forcing forcing, Shape shape);

  double operator()(double t, double u) const {
    double r = forcing_(t);
    return u < 0.0 ? r : r - g(u);
  }
  double g(double u) const {
    return std::visit([u](const auto& s) { return s.g(u); }, shape_);
  }
  double g_prime(double u) const {
    return std::visit([u](const auto& s) { return s.g_prime(u); }, shape_);
  }
  double growth(double t) const { return forcing_(t); }

  template <class Visitor>
  decltype(auto) visit_shape(Visitor&& visitor) const {
    return std::visit(std::forward<Visitor>(visitor), shape_);
  }

  const Forcing& forcing() const { return forcing_; }
  const Shape& shape() const { return shape_; }
  double M0() const { return M0_; }
  double m_tilde() const { return m_tilde_; }
  double M_tilde() const { return M_tilde_; }

  /// Same shape with g replaced by K*u (the comparison nonlinearity of u+_K).
  Reaction linearized(double K) const;

  std::string shape_name() const;
  nlohmann::json to_json() const;

 private:
  Forcing forcing_;
  Shape shape_;
  double M0_;
  double m_tilde_;
  double M_tilde_;
};

struct HypothesisReport {
  bool h0_pass = false;
  std::string h0_note;
  /// max of f(t, u) over u >= M0 (must be <= 0 at M0 and < 0 beyond).
  bool h1_pass = false;
  double h1_margin = 0.0;
  /// max of f(t, u_{k+1}) - f(t, u_k) over adjacent grid points (must be < 0).
  bool monotone_pass = false;
  double monotone_margin = 0.0;
  /// min over the grid of f(t,0) - m~0 u - f(t,u) and of f(t,u) - f(t,0) + M~0 u.
  bool h2_pass = false;
  double h2_upper_margin = 0.0;
  double h2_lower_margin = 0.0;
  /// Long-run lower average of r (must be positive).
  bool mean_pass = false;
  double mean_value = 0.0;

  bool all_pass() const { return h0_pass && h1_pass && monotone_pass && h2_pass && mean_pass; }
  nlohmann::json to_json() const;
};

struct HypothesisGrid {
  std::vector<double> t;
  std::vector<double> u;
  /// 256 t-points over [0, horizon] and 256 u-points over [0, 4*M0].
  static HypothesisGrid defaults(const Reaction& reaction, double horizon = 400.0);
};

HypothesisReport check_hypotheses(const Reaction& reaction, const HypothesisGrid& grid,
                                  const AverageConfig& averages = {});

}  // namespace latkpp
