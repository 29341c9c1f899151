#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "latkpp/reaction.hpp"

namespace latkpp {

struct PullbackConfig {
  /// Pull-back depths, increasing.
  std::vector<double> depths{25.0, 50.0, 100.0};
  double step = 0.005;
  /// Uniform agreement of the last two depths for the converged flag.
  double agreement_tol = 1e-9;
  /// Disagreement above which the not_converged flag is raised.
  double disagreement_tol = 1e-6;
};

/// Spatially homogeneous entire solution sampled on a uniform time grid,
/// queried by cubic Hermite interpolation of (u, u f(t,u)).
class EntireSolution {
 public:
  EntireSolution() = default;

  double operator()(double t) const;
  double derivative(double t) const;

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_begin_ + step_ * static_cast<double>(values_.size() - 1); }
  double step() const { return step_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& rates() const { return rates_; }
  double time(std::size_t k) const { return t_begin_ + step_ * static_cast<double>(k); }

  double depth() const { return depth_; }
  bool converged() const { return converged_; }
  bool not_converged() const { return not_converged_; }
  bool monotone_in_depth() const { return monotone_in_depth_; }
  /// sup over the grid of |u_deepest - u_previous|
  double ladder_disagreement() const { return ladder_disagreement_; }
  const std::vector<double>& ladder_history() const { return ladder_history_; }
  double inf_value() const { return inf_value_; }
  double sup_value() const { return sup_value_; }
  /// max over k of |(u_{k+2} - u_k)/(2h) - Simpson average of u f(t,u)|
  double ode_residual() const { return ode_residual_; }

  nlohmann::json summary() const;

 private:
  friend EntireSolution pullback_uplus(const Reaction&, double, double, const PullbackConfig&);

  double t_begin_ = 0.0;
  double step_ = 0.0;
  std::vector<double> values_;
  std::vector<double> rates_;
  double depth_ = 0.0;
  bool converged_ = false;
  bool not_converged_ = false;
  bool monotone_in_depth_ = true;
  double ladder_disagreement_ = 0.0;
  std::vector<double> ladder_history_;
  double inf_value_ = 0.0;
  double sup_value_ = 0.0;
  double ode_residual_ = 0.0;
};

/// Solves u' = u f(t,u) from u = M0 at t_begin - depth for each depth in the
/// ladder and keeps the deepest run on [t_begin, t_end].
EntireSolution pullback_uplus(const Reaction& reaction, double t_begin, double t_end,
                              const PullbackConfig& config = {});

}  // namespace latkpp
