#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "latkpp/reaction.hpp"

namespace latkpp {

/// Ghost values beyond the window edges. An empty ghost function clamps that
/// side (ghost = edge value); otherwise the ghost at position x is fn(t, x).
struct Boundary {
  using GhostFunction = std::function<double(double t, double x)>;

  GhostFunction left;
  GhostFunction right;

  static Boundary clamp() { return {}; }
  static Boundary fixed(GhostFunction left, GhostFunction right) {
    return {std::move(left), std::move(right)};
  }
  bool clamps_left() const { return !left; }
  bool clamps_right() const { return !right; }
};

/// Truncated solution on sites lo..hi with spacing 1/N: entry k sits at
/// x = (lo + k) / N. With N = 1 this is the integer lattice; with N > 1 the
/// unit-shift operator v(x+1) + v(x-1) - 2v(x) is an exact index shift by N.
class LatticeState {
 public:
  LatticeState() = default;
  LatticeState(std::int64_t lo, std::int64_t hi, int subcells, std::vector<double> values,
               double t, Boundary boundary = Boundary::clamp());

  /// Integer lattice with a value per site.
  static LatticeState lattice(std::int64_t lo, std::int64_t hi, std::vector<double> values,
                              double t = 0.0, Boundary boundary = Boundary::clamp());
  /// Sites lo..hi filled from datum(x).
  static LatticeState sample(std::int64_t lo, std::int64_t hi, int subcells,
                             const std::function<double(double)>& datum, double t = 0.0,
                             Boundary boundary = Boundary::clamp());

  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  int subcells() const { return subcells_; }
  std::size_t size() const { return values_.size(); }
  double t() const { return t_; }
  void set_t(double t) { t_ = t; }
  double x(std::size_t k) const {
    return static_cast<double>(lo_ + static_cast<std::int64_t>(k)) / subcells_;
  }
  /// Storage index of the site at x = site / N.
  std::size_t index_of(std::int64_t site) const { return static_cast<std::size_t>(site - lo_); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  const Boundary& boundary() const { return boundary_; }

  double sup() const;
  double inf() const;

 private:
  std::int64_t lo_ = 0;
  std::int64_t hi_ = 0;
  int subcells_ = 1;
  std::vector<double> values_;
  double t_ = 0.0;
  Boundary boundary_;
};

/// du/dt for the state at time t, written to `out` (resized as needed).
void rhs(const LatticeState& state, const Reaction& reaction, double t, std::vector<double>& out);
std::vector<double> rhs(const LatticeState& state, const Reaction& reaction);

struct IntegratorConfig {
  double dt = 0.01;
  /// Observer cadence in steps; 0 calls it only at the start and the end.
  std::size_t stride = 0;
  double blowup_factor = 10.0;
  bool enforce_step_limit = true;
};

struct RunReport {
  std::size_t steps = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
  double dt_max = 0.0;
  std::size_t sites = 0;
  std::size_t clipped = 0;          ///< entries set from a negative value to 0
  std::size_t clip_violations = 0;  ///< entries below -1e-13 before clipping
  double min_before_clip = 0.0;
  double sup_initial = 0.0;
  double sup_final = 0.0;

  nlohmann::json to_json() const;
};

/// 0.25 / (4 + L) with L = sup|r| + M~0 * max(M0, sup u0) + M0 * M~0.
double step_limit(const Reaction& reaction, double sup_initial);

/// Called with the state after `step` steps (step 0 is the initial state).
using Observer = std::function<void(const LatticeState& state, std::size_t step)>;

class Integrator {
 public:
  explicit Integrator(Reaction reaction, IntegratorConfig config = {});

  void step(LatticeState& state, double h);
  RunReport integrate(LatticeState& state, double t_end, const Observer& observer = {});

  const Reaction& reaction() const { return reaction_; }
  const IntegratorConfig& config() const { return config_; }

 private:
  Reaction reaction_;
  IntegratorConfig config_;
  std::vector<double> k1_, k2_, k3_, k4_, stage_, scratch_ext_;
  RunReport* report_ = nullptr;
};

}  // namespace latkpp
