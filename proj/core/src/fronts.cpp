#include "latkpp/fronts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latkpp/errors.hpp"
#include "latkpp/output.hpp"

namespace latkpp {

namespace {

constexpr double kTimeDifferenceStep = 1e-4;
constexpr double kSuperTolerance = -1e-6;
constexpr double kSubTolerance = 1e-6;

double lower_average(const Forcing& forcing, const AverageConfig& averages) {
  double a = estimate_averages(forcing, averages).fbar_inf;
  if (!(a > 0.0)) {
    throw AssumptionViolated("the lower long-run average of r must be positive, got " +
                             format_number(a));
  }
  return a;
}

/// B(t) = -(e^{-mu~} + e^{mu~} - 2) + c(t; mu) mu~ - r(t) as offset + scale * r(t).
AffineSignal subsolution_signal(const Forcing& forcing, double mu, double mu_tilde) {
  const double offset =
      -dispersion_numerator(mu_tilde) + mu_tilde * dispersion_numerator(mu) / mu;
  return AffineSignal(forcing, offset, mu_tilde / mu - 1.0);
}

/// M~0 * sup over xi >= A/(mu~-mu) of psi^2 e^{mu~ xi - A}, a decreasing
/// function of A.
double corrector_requirement(double A, double mu, double mu_tilde, double M_tilde) {
  const double d = mu_tilde - mu;
  double best = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double z = 0.01 * k;
    const double xi = (z + A) / d;
    const double one_minus = -std::expm1(-z);
    best = std::max(best, std::exp((mu_tilde - 2.0 * mu) * xi - A) * one_minus * one_minus);
  }
  return M_tilde * best;
}

std::vector<double> sample_times(const FrontTimeRange& range, double step) {
  std::vector<double> ts;
  const auto n = static_cast<std::int64_t>(std::floor((range.t_end - range.t_begin) / step));
  for (std::int64_t k = 0; k <= n; ++k) ts.push_back(range.t_begin + static_cast<double>(k) * step);
  return ts;
}

}  // namespace

SuperSolution::SuperSolution(Reaction reaction, double mu, EntireSolution uplus)
    : reaction_(std::move(reaction)),
      mu_(mu),
      speed_(wave_speed_signal(reaction_, mu)),
      uplus_(std::move(uplus)) {}

double SuperSolution::kink(double t) const { return -std::log(uplus_(t)) / mu_; }

double SuperSolution::profile(double xi, double t) const {
  return std::min(std::exp(-mu_ * xi), uplus_(t));
}

SuperSolution build_supersolution(const Reaction& reaction, double mu,
                                  const SuperConfig& config) {
  const double a = lower_average(reaction.forcing(), config.averages);
  const double ms = mu_star(a);
  if (!(mu > 0.0) || !(mu < ms)) {
    throw DomainError("super-solution needs 0 < mu < mu* = " + format_number(ms) + ", got " +
                      format_number(mu));
  }
  EntireSolution uplus =
      pullback_uplus(reaction, config.range.t_begin, config.range.t_end, config.pullback);
  return SuperSolution(reaction, mu, std::move(uplus));
}

SubSolution::SubSolution(Reaction reaction, double mu, double mu_tilde, Corrector A,
                         double alpha, double K, EntireSolution uplus_K)
    : reaction_(std::move(reaction)),
      mu_(mu),
      mu_tilde_(mu_tilde),
      A_(std::move(A)),
      alpha_(alpha),
      K_(K),
      uplus_K_(std::move(uplus_K)),
      speed_(wave_speed_signal(reaction_, mu)) {}

double SubSolution::psi(double xi, double t) const {
  return std::exp(-mu_ * xi) - std::exp(A_(t) - mu_tilde_ * xi);
}

double SubSolution::positivity_threshold(double t) const { return A_(t) / (mu_tilde_ - mu_); }

double SubSolution::psi_peak_location(double t) const {
  return (A_(t) + std::log(mu_tilde_ / mu_)) / (mu_tilde_ - mu_);
}

double SubSolution::psi_peak(double t) const {
  return std::exp(-mu_ * psi_peak_location(t)) * (1.0 - mu_ / mu_tilde_);
}

double SubSolution::X1(double t) const {
  const double level = uplus_K_(t);
  double lo = positivity_threshold(t), hi = psi_peak_location(t);
  if (!(psi(hi, t) > level)) throw KTooSmall("u+_K reaches the peak of psi");
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid, t) < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double SubSolution::X2(double t) const {
  const double level = uplus_K_(t);
  double lo = psi_peak_location(t);
  if (!(psi(lo, t) > level)) throw KTooSmall("u+_K reaches the peak of psi");
  double hi = lo + 1.0;
  while (psi(hi, t) >= level) hi = lo + 2.0 * (hi - lo);
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid, t) >= level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double SubSolution::profile(double xi, double t) const {
  const double A = A_(t);
  const double p = std::exp(-mu_ * xi) - std::exp(A - mu_tilde_ * xi);
  const double peak = (A + std::log(mu_tilde_ / mu_)) / (mu_tilde_ - mu_);
  if (xi > peak) return p;
  // psi increases up to its peak, so xi >= X1 exactly when psi >= u+_K.
  return std::max(p, uplus_K_(t));
}

double default_mu_tilde(double mu, double gamma) {
  return std::clamp(std::asinh(0.5 * gamma), 1.05 * mu, 1.95 * mu);
}

SubSolution build_subsolution(const Reaction& reaction, double mu, double mu_tilde,
                              const SubConfig& config) {
  if (!(mu > 0.0)) throw DomainError("sub-solution needs mu > 0");
  if (!(mu_tilde > mu && mu_tilde < 2.0 * mu)) {
    throw DomainError("mu_tilde must lie in (mu, 2 mu), got " + format_number(mu_tilde));
  }
  const AffineSignal B = subsolution_signal(reaction.forcing(), mu, mu_tilde);
  const Corrector base = build_corrector(B, config.corrector);
  const std::vector<double> ts = sample_times(config.range, config.sample_step);

  double min_lhs = std::numeric_limits<double>::infinity();
  double min_base = std::numeric_limits<double>::infinity();
  for (double t : ts) {
    min_lhs = std::min(min_lhs, base.derivative(t) + B(t));
    min_base = std::min(min_base, base(t));
  }
  double alpha = config.alpha_start;
  bool found = false;
  for (int k = 0; k <= config.alpha_doublings; ++k, alpha *= 2.0) {
    const double min_A = min_base + alpha;
    if (min_A > 0.0 &&
        min_lhs >= corrector_requirement(min_A, mu, mu_tilde, reaction.M_tilde())) {
      found = true;
      break;
    }
  }
  if (!found) throw UnboundedCorrector("no corrector shift satisfies the growth inequality");
  const Corrector A = base.shifted(alpha);

  double K = config.K_start > 0.0 ? config.K_start
                                  : 4.0 * reaction.M_tilde() * reaction.forcing().upper_bound();
  K = std::max(K, reaction.M_tilde());
  for (int k = 0; k <= config.K_doublings; ++k, K *= 2.0) {
    EntireSolution uK = pullback_uplus(reaction.linearized(K), config.range.t_begin,
                                       config.range.t_end, config.pullback);
    SubSolution candidate(reaction, mu, mu_tilde, A, alpha, K, std::move(uK));
    bool ok = true;
    for (double t : ts) {
      if (!(candidate.uplus_K()(t) < candidate.psi_peak(t))) {
        ok = false;
        break;
      }
      if (!(candidate.X2(t) - candidate.X1(t) > 1.0)) {
        ok = false;
        break;
      }
    }
    if (ok) return candidate;
  }
  throw KTooSmall("no K on the doubling ladder separates u+_K from the peak of psi");
}

nlohmann::json ResidualReport::to_json() const {
  return {{"extreme", extreme}, {"at_x", at_x},         {"at_t", at_t},
          {"points", points},   {"excluded", excluded}, {"pass", pass}};
}

ResidualReport verify_supersolution(const SuperSolution& sup, const ResidualGrid& grid) {
  if (grid.subcells < 16) throw DomainError("residual checks need at least 16 subcells per unit");
  ResidualReport report;
  report.extreme = std::numeric_limits<double>::infinity();
  const double N = grid.subcells;
  const double delta = kTimeDifferenceStep;
  const auto k_lo = static_cast<std::int64_t>(std::ceil(grid.x_min * N));
  const auto k_hi = static_cast<std::int64_t>(std::floor(grid.x_max * N));
  for (double t : sample_times({grid.t_min, grid.t_max}, grid.t_step)) {
    const double kink = sup.frame_offset(t) + sup.kink(t);
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
      const double x = static_cast<double>(k) / N;
      if (std::abs(x - kink) <= 2.0 / N) {
        ++report.excluded;
        continue;
      }
      const double v = sup.lab(x, t);
      const double dt = (sup.lab(x, t + delta) - sup.lab(x, t - delta)) / (2.0 * delta);
      const double Hv = sup.lab(x + 1.0, t) + sup.lab(x - 1.0, t) - 2.0 * v;
      const double D = dt - Hv - v * sup.reaction()(t, v);
      ++report.points;
      if (D < report.extreme) {
        report.extreme = D;
        report.at_x = x;
        report.at_t = t;
      }
    }
  }
  report.pass = report.points > 0 && report.extreme >= kSuperTolerance;
  return report;
}

ResidualReport verify_subsolution(const SubSolution& sub, const ResidualGrid& grid) {
  if (grid.subcells < 16) throw DomainError("residual checks need at least 16 subcells per unit");
  ResidualReport report;
  report.extreme = -std::numeric_limits<double>::infinity();
  const double N = grid.subcells;
  const double h = 1.0 / N;
  const double delta = kTimeDifferenceStep;
  const auto k_lo = static_cast<std::int64_t>(std::ceil(grid.x_min * N));
  const auto k_hi = static_cast<std::int64_t>(std::floor(grid.x_max * N));
  for (double t : sample_times({grid.t_min, grid.t_max}, grid.t_step)) {
    const double x1 = sub.X1(t);
    const double c = sub.speed()(t);
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
      const double xi = static_cast<double>(k) / N;
      if (std::abs(xi - x1) <= 2.0 / N) {
        ++report.excluded;
        continue;
      }
      const double p = sub.profile(xi, t);
      const double dt = (sub.profile(xi, t + delta) - sub.profile(xi, t - delta)) / (2.0 * delta);
      const double Hp = sub.profile(xi + 1.0, t) + sub.profile(xi - 1.0, t) - 2.0 * p;
      const double dxi = (sub.profile(xi + h, t) - sub.profile(xi - h, t)) / (2.0 * h);
      const double R = dt - Hp - c * dxi - p * sub.reaction()(t, p);
      ++report.points;
      if (R > report.extreme) {
        report.extreme = R;
        report.at_x = xi;
        report.at_t = t;
      }
    }
  }
  report.pass = report.points > 0 && report.extreme <= kSubTolerance;
  return report;
}

std::optional<double> FrontProfile::value(const FrontSlice& slice, std::int64_t site) const {
  const std::int64_t k = site - lo + slice.shift;
  if (k < 0 || k >= static_cast<std::int64_t>(slice.upper.size())) return std::nullopt;
  return slice.upper[static_cast<std::size_t>(k)];
}

ProfileSlice FrontProfile::profile_slice(const FrontSlice& slice) const {
  ProfileSlice p;
  p.t = slice.t;
  p.x0 = xi(slice, 0);
  p.dx = 1.0 / subcells;
  p.values = slice.upper;
  return p;
}

double FrontProfile::slice_difference(std::size_t a, std::size_t b, double margin) const {
  const FrontSlice& sa = slices.at(a);
  const FrontSlice& sb = slices.at(b);
  const auto m = static_cast<std::int64_t>(std::ceil(margin * subcells));
  const auto n = static_cast<std::int64_t>(sa.upper.size());
  double worst = 0.0;
  for (std::int64_t k = m; k < n - m; ++k) {
    const std::int64_t kb = k - sa.shift + sb.shift;
    if (kb < m || kb >= n - m) continue;
    worst = std::max(worst, std::abs(sa.upper[static_cast<std::size_t>(k)] -
                                     sb.upper[static_cast<std::size_t>(kb)]));
  }
  return worst;
}

nlohmann::json FrontProfile::summary() const {
  nlohmann::json j;
  j["gamma"] = gamma;
  j["mu"] = mu;
  j["mu_tilde"] = mu_tilde;
  j["alpha"] = alpha;
  j["K"] = K;
  j["frame_speed"] = frame_speed;
  j["subcells"] = subcells;
  j["window_lo"] = static_cast<double>(lo) / subcells;
  j["window_hi"] = static_cast<double>(hi) / subcells;
  nlohmann::json taus = nlohmann::json::array(), gaps = nlohmann::json::array();
  for (const auto& s : stages) {
    taus.push_back(s.tau);
    gaps.push_back(s.gap);
  }
  j["gap_tau"] = taus;
  j["gap"] = gaps;
  j["final_gap"] = final_gap;
  j["squeezed"] = squeezed;
  j["mu_hat"] = mu_hat;
  j["tail_r_squared"] = tail_fit.r_squared;
  j["max_shift_error"] = max_shift_error;
  j["max_monotone_violation"] = max_monotone_violation;
  j["max_sandwich_violation"] = max_sandwich_violation;
  j["max_slice_violation"] = max_slice_violation;
  j["left_limit_ratio"] = left_limit_ratio;
  j["interface"] = interface.to_json();
  return j;
}

FrontProfile squeeze_front(const Reaction& reaction, double mu, const SqueezeConfig& config) {
  if (config.tau_ladder.empty()) throw DomainError("tau ladder is empty");
  if (config.output_times.empty()) throw DomainError("at least one output time is required");
  if (config.subcells < 8) throw DomainError("front work needs at least 8 subcells per unit");
  for (std::size_t i = 1; i < config.tau_ladder.size(); ++i) {
    if (!(config.tau_ladder[i] > config.tau_ladder[i - 1]))
      throw DomainError("tau ladder must be increasing");
  }
  std::vector<double> outputs = config.output_times;
  std::sort(outputs.begin(), outputs.end());
  if (outputs.front() < 0.0) throw DomainError("output times must be >= 0");

  const double a = lower_average(reaction.forcing(), config.averages);
  const double tau_max = config.tau_ladder.back();
  const double t_last = outputs.back();
  const FrontTimeRange range{-tau_max - 1.0, t_last + 1.0};

  SuperConfig super_config{range, config.pullback, config.averages};
  const SuperSolution sup = build_supersolution(reaction, mu, super_config);
  const double gamma = chi1(mu, a);
  const double mu_tilde = config.mu_tilde > 0.0 ? config.mu_tilde : default_mu_tilde(mu, gamma);
  SubConfig sub_config = config.sub;
  sub_config.range = range;
  sub_config.pullback = config.pullback;
  const SubSolution sub = build_subsolution(reaction, mu, mu_tilde, sub_config);

  const AffineSignal& c = sup.speed();
  const int N = config.subcells;
  const double width =
      config.width > 0.0 ? config.width : std::ceil(4.0 * tau_max * c.upper_bound() + 100.0);
  const auto hi = static_cast<std::int64_t>(std::llround(config.right_edge * N));
  const auto lo = hi - static_cast<std::int64_t>(std::llround(width * N));
  const double x_left = static_cast<double>(lo) / N, x_right = static_cast<double>(hi) / N;

  auto right_ghost = [mu, &c](double t, double x) {
    return std::exp(-mu * (x - c.integral(0.0, t)));
  };
  const Boundary boundary = Boundary::fixed({}, right_ghost);

  auto check_margin = [&](double position, double t) {
    if (position - x_left < config.margin || x_right - position < config.margin) {
      throw MarginViolated("front at x = " + format_number(position) + " (t = " +
                           format_number(t) + ") is within " + format_number(config.margin) +
                           " units of the window [" + format_number(x_left) + ", " +
                           format_number(x_right) + "]");
    }
  };

  FrontProfile profile;
  profile.gamma = gamma;
  profile.mu = mu;
  profile.mu_tilde = mu_tilde;
  profile.alpha = sub.alpha();
  profile.K = sub.K();
  {
    const auto m = reaction.forcing().exact_mean();
    profile.frame_speed = (dispersion_numerator(mu) + (m ? *m : a)) / mu;
  }
  profile.subcells = N;
  profile.lo = lo;
  profile.hi = hi;

  IntegratorConfig integrator_config;
  integrator_config.dt = config.dt;
  integrator_config.stride = 1;
  Integrator integrator(reaction, integrator_config);

  std::vector<std::vector<double>> prev_upper, prev_lower;
  std::vector<std::vector<double>> cur_upper, cur_lower;
  for (double tau : config.tau_ladder) {
    const double t0 = -tau;
    check_margin(sup.frame_offset(t0) + sup.kink(t0), t0);

    auto run = [&](bool upper) {
      LatticeState state = LatticeState::sample(
          lo, hi, N,
          [&](double x) { return upper ? sup.lab(x, t0) : sub.lab(x, t0); }, t0, boundary);
      std::vector<std::vector<double>> captured(outputs.size());
      std::size_t next = 0;
      auto observer = [&](const LatticeState& s, std::size_t) {
        while (next < outputs.size() && std::abs(s.t() - outputs[next]) <= 1e-9) {
          captured[next].assign(s.values().begin(), s.values().end());
          ++next;
        }
      };
      integrator.integrate(state, t_last, observer);
      if (next != outputs.size())
        throw DomainError("output times must be multiples of dt from -tau");
      return captured;
    };
    cur_upper = run(true);
    cur_lower = run(false);

    SqueezeStage stage;
    stage.tau = tau;
    for (std::size_t o = 0; o < outputs.size(); ++o) {
      const double t = outputs[o];
      const auto& up = cur_upper[o];
      const auto& low = cur_lower[o];
      for (std::size_t k = 0; k < up.size(); ++k) {
        const double x = static_cast<double>(lo + static_cast<std::int64_t>(k)) / N;
        const double above = sup.lab(x, t), below = sub.lab(x, t);
        stage.sandwich_violation =
            std::max({stage.sandwich_violation, below - low[k], low[k] - up[k], up[k] - above});
        if (o == 0) stage.gap = std::max(stage.gap, std::abs(up[k] - low[k]));
        if (!prev_upper.empty()) {
          stage.monotone_violation =
              std::max({stage.monotone_violation, up[k] - prev_upper[o][k],
                        prev_lower[o][k] - low[k]});
        }
      }
    }
    profile.max_sandwich_violation =
        std::max(profile.max_sandwich_violation, stage.sandwich_violation);
    profile.max_monotone_violation =
        std::max(profile.max_monotone_violation, stage.monotone_violation);
    profile.stages.push_back(stage);
    prev_upper = std::move(cur_upper);
    prev_lower = std::move(cur_lower);
    if (config.stop_early && stage.gap < config.tol) break;
  }
  profile.final_gap = profile.stages.back().gap;
  profile.squeezed = profile.final_gap < config.tol;

  double ratio = std::numeric_limits<double>::infinity();
  std::vector<ProfileSlice> frame_slices;
  const auto left_probe = static_cast<std::int64_t>(std::llround(-60.0 * N));
  for (std::size_t o = 0; o < outputs.size(); ++o) {
    FrontSlice slice;
    slice.t = outputs[o];
    const double offset = sup.frame_offset(slice.t) * N;
    slice.shift = static_cast<std::int64_t>(std::llround(offset));
    slice.shift_error = std::abs(offset - static_cast<double>(slice.shift)) / N;
    slice.upper = std::move(prev_upper[o]);
    slice.lower = std::move(prev_lower[o]);
    profile.max_shift_error = std::max(profile.max_shift_error, slice.shift_error);
    profile.max_slice_violation =
        std::max(profile.max_slice_violation, monotonicity_violation(slice.upper));
    if (auto v = profile.value(slice, left_probe)) {
      ratio = std::min(ratio, *v / sup.uplus()(slice.t));
    }
    ProfileSlice lab_slice;
    lab_slice.t = slice.t;
    lab_slice.x0 = x_left;
    lab_slice.dx = 1.0 / N;
    lab_slice.values = slice.upper;
    check_margin(crossing_from_left(lab_slice, 0.5 * sup.uplus()(slice.t)), slice.t);
    profile.slices.push_back(std::move(slice));
    frame_slices.push_back(profile.profile_slice(profile.slices.back()));
  }
  profile.left_limit_ratio = ratio;
  profile.interface = interface_trajectory(frame_slices, sup.uplus());

  {
    const FrontSlice& first = profile.slices.front();
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < first.upper.size(); ++k) {
      const double xi = profile.xi(first, k);
      if (xi >= config.tail_fit_low && xi <= config.tail_fit_high && first.upper[k] > 0.0) {
        xs.push_back(xi);
        ys.push_back(std::log(first.upper[k]));
      }
    }
    profile.tail_fit = linear_fit(xs, ys);
    profile.mu_hat = -profile.tail_fit.slope;
  }

  if (config.strict && !profile.squeezed) {
    std::string history;
    for (const auto& s : profile.stages) {
      history += " tau=" + format_number(s.tau) + ":" + format_number(s.gap);
    }
    throw NotSqueezed("gap did not fall below " + format_number(config.tol) + ";" + history);
  }
  return profile;
}

FrontProfile squeeze_front_gamma(const Reaction& reaction, double gamma,
                                 const SqueezeConfig& config) {
  const double a = lower_average(reaction.forcing(), config.averages);
  const RootPair roots = root_pair(gamma, a);
  if (roots.degenerate) {
    throw DomainError("gamma equals the minimal speed; use the critical-front experiment");
  }
  return squeeze_front(reaction, roots.mu_low, config);
}

}  // namespace latkpp
