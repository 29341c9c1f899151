#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace latkpp {

struct ConstantForcing {
  double r0 = 1.0;
};

/// r(t) = r0 + amplitude * sin(2*pi*t/period + phase)
struct PeriodicForcing {
  double r0 = 1.0;
  double amplitude = 0.0;
  double period = 1.0;
  double phase = 0.0;
};

struct QuasiperiodicMode {
  double amplitude = 0.0;
  double frequency = 1.0;  ///< angular frequency
};

/// r(t) = r0 + sum_k a_k * sin(w_k * t)
struct QuasiperiodicForcing {
  double r0 = 1.0;
  std::vector<QuasiperiodicMode> modes;
};

/// Piecewise constant signal. Segment k covers [k*dwell, (k+1)*dwell) and
/// carries a level drawn from `levels` by a counter-based hash of (seed, k),
/// so the value at any t is available in O(1) and is reproducible.
struct SwitchingForcing {
  std::vector<double> levels;
  double dwell = 1.0;
  std::uint64_t seed = 0;
};

/// The growth-rate signal r(t) = f(t, 0).
class Forcing {
 public:
  using Kind = std::variant<ConstantForcing, PeriodicForcing, QuasiperiodicForcing,
                            SwitchingForcing>;

  Forcing() : kind_(ConstantForcing{}) {}
  explicit Forcing(Kind kind);

  static Forcing constant(double r0);
  static Forcing periodic(double r0, double amplitude, double period, double phase = 0.0);
  static Forcing quasiperiodic(double r0, std::vector<QuasiperiodicMode> modes);
  static Forcing switching(std::vector<double> levels, double dwell, std::uint64_t seed);

  double operator()(double t) const;

  /// Exact integral of r over [a, b] (closed-form antiderivative, or exact
  /// segment sums for switching signals).
  double integral(double a, double b) const;

  double lower_bound() const;
  double upper_bound() const;
  double sup_abs() const;

  bool is_constant() const { return std::holds_alternative<ConstantForcing>(kind_); }
  bool is_piecewise() const { return std::holds_alternative<SwitchingForcing>(kind_); }
  std::optional<double> period() const;

  /// Exact long-run mean when it is known in closed form (all families but
  /// switching).
  std::optional<double> exact_mean() const;

  const Kind& kind() const { return kind_; }
  std::string name() const;
  nlohmann::json to_json() const;

 private:
  Kind kind_;
};

/// offset + scale * r(t). Covers every time signal derived from the forcing
/// (wave speed c(t; mu), the sub-solution signal B(t)).
class AffineSignal {
 public:
  AffineSignal() = default;
  AffineSignal(Forcing forcing, double offset = 0.0, double scale = 1.0)
      : forcing_(std::move(forcing)), offset_(offset), scale_(scale) {}

  double operator()(double t) const { return offset_ + scale_ * forcing_(t); }
  double integral(double a, double b) const {
    return offset_ * (b - a) + scale_ * forcing_.integral(a, b);
  }
  double lower_bound() const;
  double upper_bound() const;

  bool is_constant() const { return forcing_.is_constant() || scale_ == 0.0; }
  const Forcing& forcing() const { return forcing_; }
  double offset() const { return offset_; }
  double scale() const { return scale_; }

 private:
  Forcing forcing_;
  double offset_ = 0.0;
  double scale_ = 1.0;
};

/// (1/T) * integral of the signal over [s, s + T].
double windowed_average(const AffineSignal& signal, double s, double T);
double windowed_average(const Forcing& forcing, double s, double T);

struct AverageConfig {
  double horizon = 400.0;
  std::vector<double> windows{10.0, 25.0, 50.0, 100.0};
  /// Start-time scan step as a fraction of the window length.
  double step_fraction = 1.0 / 50.0;
  /// Relative agreement between the last two windows for a converged flag.
  double convergence_rtol = 1e-2;
};

struct WindowStats {
  double window = 0.0;
  /// inf over k >= 1 of the block averages on [(k-1)T, kT] within the horizon.
  double fbar_T = 0.0;
  double inf_full = 0.0;
  double sup_full = 0.0;
  double inf_plus = 0.0;
  double sup_plus = 0.0;
};

struct AverageReport {
  double horizon = 0.0;
  std::vector<WindowStats> windows;
  double fbar_inf = 0.0;
  double fbar_sup = 0.0;
  double fbar_inf_plus = 0.0;
  double fbar_sup_plus = 0.0;
  bool converged_inf = false;
  bool converged_sup = false;
  bool converged_inf_plus = false;
  bool converged_sup_plus = false;

  bool converged() const {
    return converged_inf && converged_sup && converged_inf_plus && converged_sup_plus;
  }
  static std::string csv_header();
  std::string csv_row() const;
  nlohmann::json to_json() const;
};

/// Finite-horizon estimates of the liminf/limsup window averages: for each
/// window T the inf/sup of windowed_average over start times in [-H, H - T]
/// (full line) and [0, H - T] (forward half line), on a grid of step
/// T * step_fraction. Values are taken from the largest window.
AverageReport estimate_averages(const AffineSignal& signal, const AverageConfig& config = {});
AverageReport estimate_averages(const Forcing& forcing, const AverageConfig& config = {});

struct CorrectorConfig {
  double horizon = 400.0;
  double sample_step = 0.01;
  /// Largest admissible sup|A| over the horizon.
  double cap = 1e3;
  AverageConfig averages{};
};

struct CorrectorDiagnostics {
  double mean = 0.0;                 ///< the long-run lower mean of B used
  double ess_inf_derivative_sum = 0.0;  ///< min over samples of A' + B
  double sup_abs = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
};

/// A(t) = shift + integral_0^t (mean - B(tau)) dtau, so A' + B = mean.
class Corrector {
 public:
  Corrector() = default;
  Corrector(AffineSignal signal, double mean, double shift, CorrectorDiagnostics diagnostics)
      : signal_(std::move(signal)), mean_(mean), shift_(shift), diagnostics_(diagnostics) {}

  double operator()(double t) const { return shift_ + mean_ * t - signal_.integral(0.0, t); }
  double derivative(double t) const { return mean_ - signal_(t); }

  /// Same corrector with `alpha` added.
  Corrector shifted(double alpha) const;

  double mean() const { return mean_; }
  double shift() const { return shift_; }
  const AffineSignal& signal() const { return signal_; }
  const CorrectorDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  AffineSignal signal_;
  double mean_ = 0.0;
  double shift_ = 0.0;
  CorrectorDiagnostics diagnostics_;
};

Corrector build_corrector(const AffineSignal& signal, const CorrectorConfig& config = {});

}  // namespace latkpp
