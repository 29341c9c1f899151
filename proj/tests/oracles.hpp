#pragma once

#include <cmath>
#include <functional>

namespace oracle {

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

/// u' = u (r - s u), u(0) = u0.
inline double logistic(double t, double u0, double r = 1.0, double s = 1.0) {
  const double K = r / s;
  return K * u0 * std::exp(r * t) / (K + u0 * (std::exp(r * t) - 1.0));
}

/// Dispersion speed written with exponentials, independent of the library form.
inline double speed(double mu, double a) {
  return (std::exp(-mu) + std::exp(mu) - 2.0 + a) / mu;
}

struct Scan {
  double mu;
  double value;
};

/// Grid scan of speed(., a) over [lo, hi] with the given step.
inline Scan scan_minimum(double a, double lo, double hi, double step) {
  Scan best{lo, speed(lo, a)};
  const auto n = static_cast<long>(std::floor((hi - lo) / step));
  for (long k = 0; k <= n; ++k) {
    const double mu = lo + static_cast<double>(k) * step;
    const double v = speed(mu, a);
    if (v < best.value) best = {mu, v};
  }
  return best;
}

/// Vertex of the parabola through the grid minimum and its two neighbours.
inline Scan refine_parabolic(const Scan& grid, double a, double step) {
  const double fm = speed(grid.mu - step, a), f0 = grid.value, fp = speed(grid.mu + step, a);
  const double denom = fm - 2.0 * f0 + fp;
  if (!(denom > 0.0)) return grid;
  const double mu = grid.mu + 0.5 * step * (fm - fp) / denom;
  return {mu, speed(mu, a)};
}

}  // namespace oracle
