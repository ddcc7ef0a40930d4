#pragma once

// Adaptive Simpson rule, an integrator independent of the library's tensor
// Gauss-Legendre code.

#include <cmath>
#include <functional>
#include <span>

namespace haarlib::testing {

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

/// Adaptive Simpson on consecutive pieces [breaks[i], breaks[i+1]].
inline double piecewise_simpson(const std::function<double(double)>& f, std::span<const double> breaks, double tol) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) sum += adaptive_simpson(f, breaks[i], breaks[i + 1], tol);
  return sum;
}

/// int_{-1}^{1} (1 - t^2)^k dt = 2^(2k+1) (k!)^2 / (2k+1)!.
inline double bump_moment(int k) {
  double v = 2.0;
  for (int j = 1; j <= k; ++j) v *= (2.0 * j) / (2.0 * j + 1.0);
  return v;
}

}  // namespace haarlib::testing
