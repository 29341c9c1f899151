#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "latkpp/dispersion.hpp"
#include "latkpp/entire.hpp"
#include "latkpp/forcing.hpp"
#include "latkpp/interface.hpp"
#include "latkpp/lattice.hpp"
#include "latkpp/reaction.hpp"

namespace latkpp {

struct FrontTimeRange {
  double t_begin = -100.0;
  double t_end = 10.0;
};

/// phi_bar(xi, t) = min{e^{-mu xi}, u+(t)} in the frame xi = x - int_0^t c.
class SuperSolution {
 public:
  SuperSolution(Reaction reaction, double mu, EntireSolution uplus);

  double mu() const { return mu_; }
  const Reaction& reaction() const { return reaction_; }
  const EntireSolution& uplus() const { return uplus_; }
  const AffineSignal& speed() const { return speed_; }

  double frame_offset(double t) const { return speed_.integral(0.0, t); }
  /// xi where e^{-mu xi} = u+(t).
  double kink(double t) const;
  double profile(double xi, double t) const;
  /// v_bar(x, t) = phi_bar(x - int_0^t c, t)
  double lab(double x, double t) const { return profile(x - frame_offset(t), t); }

 private:
  Reaction reaction_;
  double mu_;
  AffineSignal speed_;
  EntireSolution uplus_;
};

struct SuperConfig {
  FrontTimeRange range{};
  PullbackConfig pullback{};
  AverageConfig averages{};
};

SuperSolution build_supersolution(const Reaction& reaction, double mu,
                                  const SuperConfig& config = {});

/// psi(xi, t) = e^{-mu xi} - e^{A(t) - mu~ xi}; the sub-solution is psi for
/// xi >= X1(t) and u+_K(t) to the left.
class SubSolution {
 public:
  SubSolution(Reaction reaction, double mu, double mu_tilde, Corrector A, double alpha,
              double K, EntireSolution uplus_K);

  double mu() const { return mu_; }
  double mu_tilde() const { return mu_tilde_; }
  double alpha() const { return alpha_; }
  double K() const { return K_; }
  const Corrector& corrector() const { return A_; }
  const EntireSolution& uplus_K() const { return uplus_K_; }
  const AffineSignal& speed() const { return speed_; }
  const Reaction& reaction() const { return reaction_; }

  double frame_offset(double t) const { return speed_.integral(0.0, t); }
  double A(double t) const { return A_(t); }
  double psi(double xi, double t) const;
  /// Zero of psi: A / (mu~ - mu).
  double positivity_threshold(double t) const;
  /// argmax of psi and its value.
  double psi_peak_location(double t) const;
  double psi_peak(double t) const;
  /// Crossings psi = u+_K left and right of the peak.
  double X1(double t) const;
  double X2(double t) const;
  double profile(double xi, double t) const;
  double lab(double x, double t) const { return profile(x - frame_offset(t), t); }

 private:
  Reaction reaction_;
  double mu_;
  double mu_tilde_;
  Corrector A_;
  double alpha_;
  double K_;
  EntireSolution uplus_K_;
  AffineSignal speed_;
};

struct SubConfig {
  FrontTimeRange range{};
  PullbackConfig pullback{};
  CorrectorConfig corrector{};
  /// Start of the doubling ladder for the corrector shift.
  double alpha_start = 0.125;
  int alpha_doublings = 40;
  /// Start of the K ladder; 0 selects 4 * M~0 * sup r.
  double K_start = 0.0;
  int K_doublings = 40;
  /// Time step of the sample grid used for the corrector and K checks.
  double sample_step = 0.05;
};

/// mu~ = asinh(gamma / 2) (maximizer of the mean of B) clamped into
/// [1.05 mu, 1.95 mu].
double default_mu_tilde(double mu, double gamma);

SubSolution build_subsolution(const Reaction& reaction, double mu, double mu_tilde,
                              const SubConfig& config = {});

struct ResidualGrid {
  int subcells = 16;
  double x_min = -40.0;
  double x_max = 60.0;
  double t_min = 0.0;
  double t_max = 1.0;
  double t_step = 0.05;
};

struct ResidualReport {
  double extreme = 0.0;  ///< min D for super-solutions, max residual for sub-solutions
  double at_x = 0.0;
  double at_t = 0.0;
  std::size_t points = 0;
  std::size_t excluded = 0;
  bool pass = false;
  nlohmann::json to_json() const;
};

/// D = d_t v_bar - H v_bar - v_bar f(t, v_bar) in the lab frame (centered time
/// difference, step 1e-4) skipping the 2/N neighborhood of the kink. PASS iff
/// min D >= -1e-6.
ResidualReport verify_supersolution(const SuperSolution& sup, const ResidualGrid& grid);

/// R = d_t phi - H phi - c d_xi phi - phi f(t, phi) in the moving frame, with
/// d_xi by a centered difference at spacing 1/N. PASS iff max R <= 1e-6.
ResidualReport verify_subsolution(const SubSolution& sub, const ResidualGrid& grid);

struct SqueezeConfig {
  int subcells = 16;
  /// Lab position of the right window edge.
  double right_edge = 120.0;
  /// 0 selects ceil(4 * max(tau) * sup c + 100) units.
  double width = 0.0;
  std::vector<double> tau_ladder{5.0, 10.0, 20.0, 40.0, 80.0};
  double tol = 1e-6;
  bool stop_early = true;
  /// Raise NotSqueezed when the ladder ends with gap > tol.
  bool strict = true;
  double dt = 0.005;
  std::vector<double> output_times{0.0, 1.0, 2.0};
  double margin = 50.0;
  double order_tolerance = 1e-9;
  double tail_fit_low = 20.0;
  double tail_fit_high = 40.0;
  /// 0 selects default_mu_tilde(mu, gamma).
  double mu_tilde = 0.0;
  PullbackConfig pullback{};
  SubConfig sub{};
  AverageConfig averages{};
};

/// One output time of the squeezed front in the moving frame. Entry k is at
/// xi = (lo + k - shift) / N.
struct FrontSlice {
  double t = 0.0;
  std::int64_t shift = 0;  ///< frame offset in subcells (rounded)
  double shift_error = 0.0;
  std::vector<double> upper;  ///< v^tau
  std::vector<double> lower;  ///< v_tau
};

struct SqueezeStage {
  double tau = 0.0;
  double gap = 0.0;
  double monotone_violation = 0.0;
  double sandwich_violation = 0.0;
};

struct FrontProfile {
  double gamma = 0.0;
  double mu = 0.0;
  double mu_tilde = 0.0;
  double alpha = 0.0;
  double K = 0.0;
  double frame_speed = 0.0;  ///< long-run mean of c(t; mu)
  int subcells = 16;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<SqueezeStage> stages;
  std::vector<FrontSlice> slices;
  InterfaceTrajectory interface;
  LinearFit tail_fit;
  double mu_hat = 0.0;
  double max_shift_error = 0.0;
  double max_monotone_violation = 0.0;
  double max_sandwich_violation = 0.0;
  double max_slice_violation = 0.0;  ///< largest increase in xi over all slices
  double left_limit_ratio = 0.0;    ///< min over slices of phi(-60, t) / u+(t)
  bool squeezed = false;
  double final_gap = 0.0;

  double xi(const FrontSlice& slice, std::size_t k) const {
    return static_cast<double>(lo + static_cast<std::int64_t>(k) - slice.shift) / subcells;
  }
  /// phi at subcell xi = site / N, if inside the window.
  std::optional<double> value(const FrontSlice& slice, std::int64_t site) const;
  ProfileSlice profile_slice(const FrontSlice& slice) const;
  /// sup |phi(., t_a) - phi(., t_b)| over common frame sites at least `margin`
  /// units from the window edges.
  double slice_difference(std::size_t a, std::size_t b, double margin) const;

  nlohmann::json summary() const;
};

/// Squeeze between v^tau (super-solution datum at -tau) and v_tau
/// (sub-solution datum) along the tau ladder.
FrontProfile squeeze_front(const Reaction& reaction, double mu, const SqueezeConfig& config = {});
/// mu = root_pair(gamma, fbar_inf).mu_low
FrontProfile squeeze_front_gamma(const Reaction& reaction, double gamma,
                                 const SqueezeConfig& config = {});

}  // namespace latkpp
