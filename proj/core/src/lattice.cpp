#include "latkpp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latkpp/errors.hpp"
#include "latkpp/output.hpp"

namespace latkpp {

namespace {

constexpr double kClipTolerance = -1e-13;

template <class ShapeT>
void stencil_kernel(const double* ext, std::size_t n, std::size_t N, double r,
                    const ShapeT& shape, double* out) {
  for (std::size_t k = 0; k < n; ++k) {
    const double u = ext[k + N];
    const double f = u < 0.0 ? r : r - shape.g(u);
    out[k] = ext[k] + ext[k + 2 * N] - 2.0 * u + u * f;
  }
}

void evaluate_rhs(std::span<const double> values, std::int64_t lo, int subcells,
                  const Boundary& boundary, const Reaction& reaction, double t,
                  std::vector<double>& ext, std::vector<double>& out) {
  const std::size_t n = values.size();
  const auto N = static_cast<std::size_t>(subcells);
  ext.resize(n + 2 * N);
  out.resize(n);
  std::copy(values.begin(), values.end(), ext.begin() + static_cast<std::ptrdiff_t>(N));
  const double inv = 1.0 / subcells;
  const auto hi = lo + static_cast<std::int64_t>(n) - 1;
  if (boundary.clamps_left()) {
    std::fill(ext.begin(), ext.begin() + static_cast<std::ptrdiff_t>(N), values.front());
  } else {
    for (std::size_t j = 1; j <= N; ++j) {
      ext[N - j] = boundary.left(t, static_cast<double>(lo - static_cast<std::int64_t>(j)) * inv);
    }
  }
  if (boundary.clamps_right()) {
    std::fill(ext.end() - static_cast<std::ptrdiff_t>(N), ext.end(), values.back());
  } else {
    for (std::size_t j = 1; j <= N; ++j) {
      ext[N + n - 1 + j] =
          boundary.right(t, static_cast<double>(hi + static_cast<std::int64_t>(j)) * inv);
    }
  }
  const double r = reaction.growth(t);
  reaction.visit_shape(
      [&](const auto& shape) { stencil_kernel(ext.data(), n, N, r, shape, out.data()); });
}

}  // namespace

LatticeState::LatticeState(std::int64_t lo, std::int64_t hi, int subcells,
                           std::vector<double> values, double t, Boundary boundary)
    : lo_(lo),
      hi_(hi),
      subcells_(subcells),
      values_(std::move(values)),
      t_(t),
      boundary_(std::move(boundary)) {
  if (subcells_ < 1) throw ValidationError("subcells per unit must be >= 1");
  if (hi_ - lo_ < 4) throw ValidationError("window must contain at least 5 sites");
  if (values_.size() != static_cast<std::size_t>(hi_ - lo_ + 1))
    throw ValidationError("value count does not match the window");
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("state values must be finite and >= 0");
  }
}

LatticeState LatticeState::lattice(std::int64_t lo, std::int64_t hi, std::vector<double> values,
                                   double t, Boundary boundary) {
  return LatticeState(lo, hi, 1, std::move(values), t, std::move(boundary));
}

LatticeState LatticeState::sample(std::int64_t lo, std::int64_t hi, int subcells,
                                  const std::function<double(double)>& datum, double t,
                                  Boundary boundary) {
  if (hi < lo) throw ValidationError("window must satisfy lo <= hi");
  std::vector<double> values(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = datum(static_cast<double>(lo + static_cast<std::int64_t>(k)) / subcells);
  }
  return LatticeState(lo, hi, subcells, std::move(values), t, std::move(boundary));
}

double LatticeState::sup() const { return *std::max_element(values_.begin(), values_.end()); }
double LatticeState::inf() const { return *std::min_element(values_.begin(), values_.end()); }

void rhs(const LatticeState& state, const Reaction& reaction, double t, std::vector<double>& out) {
  std::vector<double> ext;
  evaluate_rhs(state.values(), state.lo(), state.subcells(), state.boundary(), reaction, t, ext,
               out);
}

std::vector<double> rhs(const LatticeState& state, const Reaction& reaction) {
  std::vector<double> out;
  rhs(state, reaction, state.t(), out);
  return out;
}

nlohmann::json RunReport::to_json() const {
  return {{"steps", steps},
          {"t_start", t_start},
          {"t_end", t_end},
          {"dt", dt},
          {"dt_max", dt_max},
          {"sites", sites},
          {"clipped", clipped},
          {"clip_violations", clip_violations},
          {"min_before_clip", min_before_clip},
          {"sup_initial", sup_initial},
          {"sup_final", sup_final}};
}

double step_limit(const Reaction& reaction, double sup_initial) {
  const double range = std::max(reaction.M0(), sup_initial);
  const double L = reaction.forcing().sup_abs() + reaction.M_tilde() * range +
                   reaction.M0() * reaction.M_tilde();
  return 0.25 / (4.0 + L);
}

Integrator::Integrator(Reaction reaction, IntegratorConfig config)
    : reaction_(std::move(reaction)), config_(config) {
  if (!(config_.dt > 0.0) || !std::isfinite(config_.dt))
    throw ValidationError("dt must be positive");
  if (!(config_.blowup_factor > 1.0)) throw ValidationError("blowup factor must exceed 1");
}

void Integrator::step(LatticeState& state, double h) {
  std::span<double> u = state.values();
  const std::size_t n = u.size();
  const double t = state.t();
  const std::int64_t lo = state.lo();
  const int N = state.subcells();
  const Boundary& boundary = state.boundary();
  std::vector<double>& ext = scratch_ext_;

  evaluate_rhs(u, lo, N, boundary, reaction_, t, ext, k1_);
  stage_.resize(n);
  for (std::size_t k = 0; k < n; ++k) stage_[k] = u[k] + 0.5 * h * k1_[k];
  evaluate_rhs(stage_, lo, N, boundary, reaction_, t + 0.5 * h, ext, k2_);
  for (std::size_t k = 0; k < n; ++k) stage_[k] = u[k] + 0.5 * h * k2_[k];
  evaluate_rhs(stage_, lo, N, boundary, reaction_, t + 0.5 * h, ext, k3_);
  for (std::size_t k = 0; k < n; ++k) stage_[k] = u[k] + h * k3_[k];
  evaluate_rhs(stage_, lo, N, boundary, reaction_, t + h, ext, k4_);
  const double sixth = h / 6.0;
  for (std::size_t k = 0; k < n; ++k) {
    u[k] += sixth * (k1_[k] + 2.0 * k2_[k] + 2.0 * k3_[k] + k4_[k]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (u[k] < 0.0) {
      if (report_) {
        ++report_->clipped;
        if (u[k] < kClipTolerance) ++report_->clip_violations;
        report_->min_before_clip = std::min(report_->min_before_clip, u[k]);
      }
      u[k] = 0.0;
    }
  }
  state.set_t(t + h);
}

RunReport Integrator::integrate(LatticeState& state, double t_end, const Observer& observer) {
  const double t0 = state.t();
  const double span = t_end - t0;
  if (!(span >= 0.0)) throw DomainError("t_end must not precede the state time");
  RunReport report;
  report.t_start = t0;
  report.t_end = t_end;
  report.sites = state.size();
  report.sup_initial = state.sup();
  report.dt_max = step_limit(reaction_, report.sup_initial);
  if (config_.enforce_step_limit && config_.dt > report.dt_max) {
    throw StepSizeError("dt = " + format_number(config_.dt) + " exceeds dt_max = " +
                        format_number(report.dt_max));
  }
  const double blowup = config_.blowup_factor * std::max(reaction_.M0(), report.sup_initial);

  if (observer) observer(state, 0);
  if (span == 0.0) {
    report.sup_final = report.sup_initial;
    return report;
  }
  const auto n = static_cast<std::size_t>(std::ceil(span / config_.dt - 1e-9));
  const double h = span / static_cast<double>(n);
  report.dt = h;
  report_ = &report;
  for (std::size_t s = 1; s <= n; ++s) {
    step(state, h);
    state.set_t(s == n ? t_end : t0 + static_cast<double>(s) * h);
    double sup = 0.0;
    for (double v : state.values()) {
      if (!(v <= blowup)) {
        report_ = nullptr;
        throw BlowUp("solution exceeded " + format_number(blowup) + " at t = " +
                     format_number(state.t()));
      }
      sup = std::max(sup, v);
    }
    report.sup_final = sup;
    ++report.steps;
    if (observer && ((config_.stride > 0 && s % config_.stride == 0) || s == n)) {
      observer(state, s);
    }
  }
  report_ = nullptr;
  return report;
}

}  // namespace latkpp
