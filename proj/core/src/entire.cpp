#include "latkpp/entire.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latkpp/errors.hpp"
#include "latkpp/output.hpp"

namespace latkpp {

namespace {

double rate(const Reaction& reaction, double t, double u) { return u * reaction(t, u); }

double rk4_scalar(const Reaction& reaction, double t, double u, double h) {
  double k1 = rate(reaction, t, u);
  double k2 = rate(reaction, t + 0.5 * h, u + 0.5 * h * k1);
  double k3 = rate(reaction, t + 0.5 * h, u + 0.5 * h * k2);
  double k4 = rate(reaction, t + h, u + h * k3);
  return u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

double EntireSolution::operator()(double t) const {
  if (values_.empty()) throw DomainError("entire solution is empty");
  const double lo = t_begin_, hi = t_end();
  if (t < lo - 1e-9 || t > hi + 1e-9) {
    throw DomainError("t = " + format_number(t) + " outside the sampled range [" +
                      format_number(lo) + ", " + format_number(hi) + "]");
  }
  double s = (t - t_begin_) / step_;
  auto k = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0,
                                               static_cast<double>(values_.size() - 2)));
  double theta = std::clamp(s - static_cast<double>(k), 0.0, 1.0);
  if (theta == 0.0) return values_[k];
  double t2 = theta * theta, t3 = t2 * theta;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + theta;
  double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * values_[k] + h10 * step_ * rates_[k] + h01 * values_[k + 1] +
         h11 * step_ * rates_[k + 1];
}

double EntireSolution::derivative(double t) const {
  double s = (t - t_begin_) / step_;
  auto k = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0,
                                               static_cast<double>(values_.size() - 2)));
  double theta = std::clamp(s - static_cast<double>(k), 0.0, 1.0);
  double t2 = theta * theta;
  double d00 = 6 * t2 - 6 * theta, d10 = 3 * t2 - 4 * theta + 1;
  double d01 = -6 * t2 + 6 * theta, d11 = 3 * t2 - 2 * theta;
  return (d00 * values_[k] + d01 * values_[k + 1]) / step_ + d10 * rates_[k] +
         d11 * rates_[k + 1];
}

nlohmann::json EntireSolution::summary() const {
  return {{"t_begin", t_begin_},
          {"t_end", t_end()},
          {"step", step_},
          {"depth", depth_},
          {"converged", converged_},
          {"not_converged", not_converged_},
          {"monotone_in_depth", monotone_in_depth_},
          {"ladder_disagreement", ladder_disagreement_},
          {"ladder_history", ladder_history_},
          {"inf", inf_value_},
          {"sup", sup_value_},
          {"ode_residual", ode_residual_}};
}

EntireSolution pullback_uplus(const Reaction& reaction, double t_begin, double t_end,
                              const PullbackConfig& config) {
  if (!(t_end > t_begin)) throw DomainError("pull-back range must satisfy t_begin < t_end");
  if (config.depths.empty()) throw DomainError("pull-back depth ladder is empty");
  if (!(config.step > 0.0)) throw DomainError("pull-back step must be positive");
  for (std::size_t i = 0; i < config.depths.size(); ++i) {
    if (!(config.depths[i] > 0.0) || (i > 0 && !(config.depths[i] > config.depths[i - 1])))
      throw DomainError("pull-back depths must be positive and increasing");
  }
  const double h = config.step;
  const auto samples = static_cast<std::size_t>(std::ceil((t_end - t_begin) / h - 1e-9)) + 1;

  EntireSolution out;
  out.t_begin_ = t_begin;
  out.step_ = h;
  std::vector<double> previous;
  for (double depth : config.depths) {
    const auto lead = static_cast<std::int64_t>(std::llround(depth / h));
    double u = reaction.M0();
    for (std::int64_t k = -lead; k < 0; ++k) {
      u = rk4_scalar(reaction, t_begin + static_cast<double>(k) * h, u, h);
    }
    std::vector<double> run(samples);
    run[0] = u;
    for (std::size_t k = 1; k < samples; ++k) {
      u = rk4_scalar(reaction, t_begin + static_cast<double>(k - 1) * h, u, h);
      run[k] = u;
    }
    if (!previous.empty()) {
      double diff = 0.0;
      for (std::size_t k = 0; k < samples; ++k) {
        diff = std::max(diff, std::abs(run[k] - previous[k]));
        if (run[k] > previous[k] + 1e-12) out.monotone_in_depth_ = false;
      }
      out.ladder_history_.push_back(diff);
      out.ladder_disagreement_ = diff;
    }
    out.depth_ = depth;
    previous = std::move(run);
  }
  out.values_ = std::move(previous);
  out.rates_.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    out.rates_[k] = rate(reaction, out.time(k), out.values_[k]);
  }
  out.converged_ =
      config.depths.size() >= 2 && out.ladder_disagreement_ <= config.agreement_tol;
  out.not_converged_ = config.depths.size() < 2 || out.ladder_disagreement_ > config.disagreement_tol;
  out.inf_value_ = *std::min_element(out.values_.begin(), out.values_.end());
  out.sup_value_ = *std::max_element(out.values_.begin(), out.values_.end());
  double residual = 0.0;
  for (std::size_t k = 0; k + 2 < samples; ++k) {
    double difference = (out.values_[k + 2] - out.values_[k]) / (2.0 * h);
    double simpson = (out.rates_[k] + 4.0 * out.rates_[k + 1] + out.rates_[k + 2]) / 6.0;
    residual = std::max(residual, std::abs(difference - simpson));
  }
  out.ode_residual_ = residual;
  return out;
}

}  // namespace latkpp
