#pragma once

#include <cmath>
#include <functional>

namespace relgrowth::detail {

// Adaptive Simpson quadrature with the classic Richardson error control.
// Depth 40 is unreachable for the smooth survival integrands used here; the
// cap only guards against pathological callers.
inline double simpson_slice(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double fm,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_slice(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson_slice(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_slice(f, a, fa, b, fb, fm, whole, tol, 40);
}

}  // namespace relgrowth::detail
