#include "latkpp/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "latkpp/errors.hpp"
#include "latkpp/output.hpp"

namespace latkpp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double switching_level(const SwitchingForcing& s, std::int64_t segment) {
  std::uint64_t h = splitmix64(s.seed ^ splitmix64(static_cast<std::uint64_t>(segment)));
  return s.levels[static_cast<std::size_t>(h % s.levels.size())];
}

std::int64_t segment_of(const SwitchingForcing& s, double t) {
  return static_cast<std::int64_t>(std::floor(t / s.dwell));
}

double switching_integral(const SwitchingForcing& s, double a, double b) {
  if (a == b) return 0.0;
  if (a > b) return -switching_integral(s, b, a);
  std::int64_t ka = segment_of(s, a);
  std::int64_t kb = segment_of(s, b);
  if (ka == kb) return switching_level(s, ka) * (b - a);
  double sum = switching_level(s, ka) * (static_cast<double>(ka + 1) * s.dwell - a);
  for (std::int64_t k = ka + 1; k < kb; ++k) sum += switching_level(s, k) * s.dwell;
  sum += switching_level(s, kb) * (b - static_cast<double>(kb) * s.dwell);
  return sum;
}

void validate(const Forcing::Kind& kind) {
  std::visit(Overloaded{
                 [](const ConstantForcing& c) {
                   if (!std::isfinite(c.r0)) throw ValidationError("r0 must be finite");
                 },
                 [](const PeriodicForcing& p) {
                   if (!std::isfinite(p.r0) || !std::isfinite(p.amplitude) ||
                       !std::isfinite(p.phase))
                     throw ValidationError("periodic forcing parameters must be finite");
                   if (!(p.period > 0.0) || !std::isfinite(p.period))
                     throw ValidationError("period must be positive");
                 },
                 [](const QuasiperiodicForcing& q) {
                   if (!std::isfinite(q.r0)) throw ValidationError("r0 must be finite");
                   for (const auto& m : q.modes) {
                     if (!std::isfinite(m.amplitude) || !std::isfinite(m.frequency))
                       throw ValidationError("quasiperiodic modes must be finite");
                   }
                 },
                 [](const SwitchingForcing& s) {
                   if (s.levels.empty()) throw ValidationError("levels must be nonempty");
                   for (double v : s.levels) {
                     if (!(v > 0.0) || !std::isfinite(v))
                       throw ValidationError("levels must be positive");
                   }
                   if (!(s.dwell > 0.0) || !std::isfinite(s.dwell))
                     throw ValidationError("dwell must be positive");
                 },
             },
             kind);
}

}  // namespace

Forcing::Forcing(Kind kind) : kind_(std::move(kind)) { validate(kind_); }

Forcing Forcing::constant(double r0) { return Forcing(ConstantForcing{r0}); }

Forcing Forcing::periodic(double r0, double amplitude, double period, double phase) {
  return Forcing(PeriodicForcing{r0, amplitude, period, phase});
}

Forcing Forcing::quasiperiodic(double r0, std::vector<QuasiperiodicMode> modes) {
  return Forcing(QuasiperiodicForcing{r0, std::move(modes)});
}

Forcing Forcing::switching(std::vector<double> levels, double dwell, std::uint64_t seed) {
  return Forcing(SwitchingForcing{std::move(levels), dwell, seed});
}

double Forcing::operator()(double t) const {
  return std::visit(
      Overloaded{
          [](const ConstantForcing& c) { return c.r0; },
          [t](const PeriodicForcing& p) {
            return p.r0 + p.amplitude * std::sin(2.0 * std::numbers::pi * t / p.period + p.phase);
          },
          [t](const QuasiperiodicForcing& q) {
            double v = q.r0;
            for (const auto& m : q.modes) v += m.amplitude * std::sin(m.frequency * t);
            return v;
          },
          [t](const SwitchingForcing& s) { return switching_level(s, segment_of(s, t)); },
      },
      kind_);
}

double Forcing::integral(double a, double b) const {
  return std::visit(
      Overloaded{
          [a, b](const ConstantForcing& c) { return c.r0 * (b - a); },
          [a, b](const PeriodicForcing& p) {
            double w = 2.0 * std::numbers::pi / p.period;
            return p.r0 * (b - a) -
                   p.amplitude / w * (std::cos(w * b + p.phase) - std::cos(w * a + p.phase));
          },
          [a, b](const QuasiperiodicForcing& q) {
            double v = q.r0 * (b - a);
            for (const auto& m : q.modes) {
              if (m.frequency == 0.0) continue;
              v -= m.amplitude / m.frequency *
                   (std::cos(m.frequency * b) - std::cos(m.frequency * a));
            }
            return v;
          },
          [a, b](const SwitchingForcing& s) { return switching_integral(s, a, b); },
      },
      kind_);
}

double Forcing::lower_bound() const {
  return std::visit(Overloaded{
                        [](const ConstantForcing& c) { return c.r0; },
                        [](const PeriodicForcing& p) { return p.r0 - std::abs(p.amplitude); },
                        [](const QuasiperiodicForcing& q) {
                          double v = q.r0;
                          for (const auto& m : q.modes) {
                            if (m.frequency != 0.0) v -= std::abs(m.amplitude);
                          }
                          return v;
                        },
                        [](const SwitchingForcing& s) {
                          return *std::min_element(s.levels.begin(), s.levels.end());
                        },
                    },
                    kind_);
}

double Forcing::upper_bound() const {
  return std::visit(Overloaded{
                        [](const ConstantForcing& c) { return c.r0; },
                        [](const PeriodicForcing& p) { return p.r0 + std::abs(p.amplitude); },
                        [](const QuasiperiodicForcing& q) {
                          double v = q.r0;
                          for (const auto& m : q.modes) {
                            if (m.frequency != 0.0) v += std::abs(m.amplitude);
                          }
                          return v;
                        },
                        [](const SwitchingForcing& s) {
                          return *std::max_element(s.levels.begin(), s.levels.end());
                        },
                    },
                    kind_);
}

double Forcing::sup_abs() const {
  return std::max(std::abs(lower_bound()), std::abs(upper_bound()));
}

std::optional<double> Forcing::period() const {
  if (const auto* p = std::get_if<PeriodicForcing>(&kind_)) return p->period;
  return std::nullopt;
}

std::optional<double> Forcing::exact_mean() const {
  return std::visit(Overloaded{
                        [](const ConstantForcing& c) -> std::optional<double> { return c.r0; },
                        [](const PeriodicForcing& p) -> std::optional<double> { return p.r0; },
                        [](const QuasiperiodicForcing& q) -> std::optional<double> {
                          return q.r0;
                        },
                        [](const SwitchingForcing&) -> std::optional<double> {
                          return std::nullopt;
                        },
                    },
                    kind_);
}

std::string Forcing::name() const {
  return std::visit(Overloaded{
                        [](const ConstantForcing&) { return std::string("constant"); },
                        [](const PeriodicForcing&) { return std::string("periodic"); },
                        [](const QuasiperiodicForcing&) { return std::string("quasiperiodic"); },
                        [](const SwitchingForcing&) { return std::string("switching"); },
                    },
                    kind_);
}

nlohmann::json Forcing::to_json() const {
  nlohmann::json j;
  j["kind"] = name();
  std::visit(Overloaded{
                 [&j](const ConstantForcing& c) { j["r0"] = c.r0; },
                 [&j](const PeriodicForcing& p) {
                   j["r0"] = p.r0;
                   j["amplitude"] = p.amplitude;
                   j["period"] = p.period;
                   j["phase"] = p.phase;
                 },
                 [&j](const QuasiperiodicForcing& q) {
                   j["r0"] = q.r0;
                   nlohmann::json modes = nlohmann::json::array();
                   for (const auto& m : q.modes) modes.push_back({m.amplitude, m.frequency});
                   j["modes"] = modes;
                 },
                 [&j](const SwitchingForcing& s) {
                   j["levels"] = s.levels;
                   j["dwell"] = s.dwell;
                   j["seed"] = s.seed;
                 },
             },
             kind_);
  return j;
}

double AffineSignal::lower_bound() const {
  return offset_ + (scale_ >= 0.0 ? scale_ * forcing_.lower_bound()
                                  : scale_ * forcing_.upper_bound());
}

double AffineSignal::upper_bound() const {
  return offset_ + (scale_ >= 0.0 ? scale_ * forcing_.upper_bound()
                                  : scale_ * forcing_.lower_bound());
}

double windowed_average(const AffineSignal& signal, double s, double T) {
  if (!(T > 0.0)) throw DomainError("window length must be positive");
  if (signal.is_constant()) return signal(s);
  return signal.integral(s, s + T) / T;
}

double windowed_average(const Forcing& forcing, double s, double T) {
  return windowed_average(AffineSignal(forcing), s, T);
}

std::string AverageReport::csv_header() {
  return "horizon,window,fbar_T,fbar_inf,fbar_sup,fbar_inf_plus,fbar_sup_plus,"
         "converged_inf,converged_sup,converged_inf_plus,converged_sup_plus";
}

std::string AverageReport::csv_row() const {
  double window = windows.empty() ? 0.0 : windows.back().window;
  double fbar_T = windows.empty() ? 0.0 : windows.back().fbar_T;
  std::string row;
  for (double v : {horizon, window, fbar_T, fbar_inf, fbar_sup, fbar_inf_plus, fbar_sup_plus}) {
    row += format_number(v);
    row += ',';
  }
  row += converged_inf ? "1," : "0,";
  row += converged_sup ? "1," : "0,";
  row += converged_inf_plus ? "1," : "0,";
  row += converged_sup_plus ? "1" : "0";
  return row;
}

nlohmann::json AverageReport::to_json() const {
  nlohmann::json j;
  j["horizon"] = horizon;
  j["fbar_inf"] = fbar_inf;
  j["fbar_sup"] = fbar_sup;
  j["fbar_inf_plus"] = fbar_inf_plus;
  j["fbar_sup_plus"] = fbar_sup_plus;
  j["converged_inf"] = converged_inf;
  j["converged_sup"] = converged_sup;
  j["converged_inf_plus"] = converged_inf_plus;
  j["converged_sup_plus"] = converged_sup_plus;
  nlohmann::json ws = nlohmann::json::array();
  for (const auto& w : windows) {
    ws.push_back({{"window", w.window},
                  {"fbar_T", w.fbar_T},
                  {"inf_full", w.inf_full},
                  {"sup_full", w.sup_full},
                  {"inf_plus", w.inf_plus},
                  {"sup_plus", w.sup_plus}});
  }
  j["windows"] = ws;
  return j;
}

namespace {

bool agree(double a, double b, double rtol) {
  double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= rtol * scale;
}

WindowStats scan_window(const AffineSignal& signal, double H, double T, double step_fraction) {
  WindowStats w;
  w.window = T;
  const double step = T * step_fraction;
  const double inf = std::numeric_limits<double>::infinity();
  double inf_plus = inf, sup_plus = -inf;
  // Forward grid s = k * step on [0, H - T]; the small slack admits the end
  // point when H - T is an exact multiple of the step.
  const auto n_plus = static_cast<std::int64_t>(std::floor((H - T) / step + 1e-9));
  for (std::int64_t k = 0; k <= n_plus; ++k) {
    double v = windowed_average(signal, static_cast<double>(k) * step, T);
    inf_plus = std::min(inf_plus, v);
    sup_plus = std::max(sup_plus, v);
  }
  double inf_full = inf_plus, sup_full = sup_plus;
  const auto n_minus = static_cast<std::int64_t>(std::floor(H / step + 1e-9));
  for (std::int64_t k = 1; k <= n_minus; ++k) {
    double v = windowed_average(signal, -static_cast<double>(k) * step, T);
    inf_full = std::min(inf_full, v);
    sup_full = std::max(sup_full, v);
  }
  double fbar = inf;
  const auto blocks = static_cast<std::int64_t>(std::floor(H / T + 1e-9));
  for (std::int64_t k = 1; k <= blocks; ++k) {
    fbar = std::min(fbar, windowed_average(signal, static_cast<double>(k - 1) * T, T));
  }
  w.fbar_T = fbar;
  w.inf_full = inf_full;
  w.sup_full = sup_full;
  w.inf_plus = inf_plus;
  w.sup_plus = sup_plus;
  return w;
}

}  // namespace

AverageReport estimate_averages(const AffineSignal& signal, const AverageConfig& config) {
  if (config.windows.empty()) throw DomainError("at least one averaging window is required");
  if (!(config.horizon > 0.0)) throw DomainError("horizon must be positive");
  if (!(config.step_fraction > 0.0) || config.step_fraction > 1.0)
    throw DomainError("step_fraction must lie in (0, 1]");
  std::vector<double> windows = config.windows;
  std::sort(windows.begin(), windows.end());
  if (!(windows.front() > 0.0)) throw DomainError("averaging windows must be positive");
  if (windows.back() > config.horizon / 4.0)
    throw DomainError("largest averaging window must not exceed horizon / 4");

  AverageReport report;
  report.horizon = config.horizon;
  for (double T : windows) {
    report.windows.push_back(scan_window(signal, config.horizon, T, config.step_fraction));
  }
  const WindowStats& last = report.windows.back();
  report.fbar_inf = last.inf_full;
  report.fbar_sup = last.sup_full;
  report.fbar_inf_plus = last.inf_plus;
  report.fbar_sup_plus = last.sup_plus;
  if (report.windows.size() >= 2) {
    const WindowStats& prev = report.windows[report.windows.size() - 2];
    double rtol = config.convergence_rtol;
    report.converged_inf = agree(last.inf_full, prev.inf_full, rtol);
    report.converged_sup = agree(last.sup_full, prev.sup_full, rtol);
    report.converged_inf_plus = agree(last.inf_plus, prev.inf_plus, rtol);
    report.converged_sup_plus = agree(last.sup_plus, prev.sup_plus, rtol);
  }
  return report;
}

AverageReport estimate_averages(const Forcing& forcing, const AverageConfig& config) {
  return estimate_averages(AffineSignal(forcing), config);
}

Corrector Corrector::shifted(double alpha) const {
  Corrector c = *this;
  c.shift_ += alpha;
  c.diagnostics_.min_value += alpha;
  c.diagnostics_.max_value += alpha;
  c.diagnostics_.sup_abs =
      std::max(std::abs(c.diagnostics_.min_value), std::abs(c.diagnostics_.max_value));
  return c;
}

Corrector build_corrector(const AffineSignal& signal, const CorrectorConfig& config) {
  if (!(config.horizon > 0.0)) throw DomainError("corrector horizon must be positive");
  if (!(config.sample_step > 0.0)) throw DomainError("corrector sample step must be positive");

  // Families with a closed-form mean use it; only switching signals rely on
  // the finite-horizon estimate.
  double mean = 0.0;
  if (auto m = signal.forcing().exact_mean()) {
    mean = signal.offset() + signal.scale() * *m;
  } else {
    mean = estimate_averages(signal, config.averages).fbar_inf;
  }
  if (!(mean > 0.0)) {
    throw AssumptionViolated("corrector requires a positive long-run mean, got " +
                             format_number(mean));
  }

  Corrector corrector(signal, mean, 0.0, {});
  CorrectorDiagnostics d;
  d.mean = mean;
  d.min_value = std::numeric_limits<double>::infinity();
  d.max_value = -d.min_value;
  d.ess_inf_derivative_sum = d.min_value;

  const double h = 1e-3;
  const bool piecewise = signal.forcing().is_piecewise() && !signal.is_constant();
  const double dwell =
      piecewise ? std::get<SwitchingForcing>(signal.forcing().kind()).dwell : 0.0;
  const auto n = static_cast<std::int64_t>(std::floor(config.horizon / config.sample_step));
  for (std::int64_t k = -n; k <= n; ++k) {
    double t = static_cast<double>(k) * config.sample_step;
    double a = corrector(t);
    d.min_value = std::min(d.min_value, a);
    d.max_value = std::max(d.max_value, a);
    if (piecewise) {
      // The stencil must not straddle a jump of B.
      double offset = t - dwell * std::floor(t / dwell);
      if (offset <= 2.0 * h || dwell - offset <= 2.0 * h) continue;
    }
    double derivative = (corrector(t - 2 * h) - 8.0 * corrector(t - h) + 8.0 * corrector(t + h) -
                         corrector(t + 2 * h)) /
                        (12.0 * h);
    d.ess_inf_derivative_sum = std::min(d.ess_inf_derivative_sum, derivative + signal(t));
  }
  d.sup_abs = std::max(std::abs(d.min_value), std::abs(d.max_value));
  if (d.sup_abs > config.cap) {
    throw UnboundedCorrector("sup|A| = " + format_number(d.sup_abs) + " exceeds cap " +
                             format_number(config.cap));
  }
  return Corrector(signal, mean, 0.0, d);
}

}  // namespace latkpp
