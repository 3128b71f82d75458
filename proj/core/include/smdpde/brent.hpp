#pragma once

#include <cmath>
#include <cstddef>

namespace smdpde {

struct BrentResult {
  double x = 0.0;
  double fx = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  /// Width of the final bracket [a, b].
  double bracket_width = 0.0;
};

/// Brent's derivative-free minimizer on [lo, hi] (golden section with
/// parabolic interpolation). On convergence the final bracket [a, b] is no
/// wider than abs_tol (plus a few ulps of |x|).
template <class F>
BrentResult brent_minimize(F&& f, double lo, double hi, double abs_tol,
                           std::size_t max_iter = 200) {
  constexpr double golden = 0.3819660112501051;  // (3 - sqrt 5) / 2
  constexpr double rel_eps = 4.0 * 2.220446049250313e-16;

  double a = lo;
  double b = hi;
  double x = a + golden * (b - a);
  double w = x;
  double v = x;
  double fx = f(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;

  BrentResult out;
  out.evaluations = 1;

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    const double mid = 0.5 * (a + b);
    const double tol1 = rel_eps * std::abs(x) + abs_tol / 4.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) {
      out.converged = true;
      break;
    }
    bool golden_step = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (mid >= x) ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= mid) ? a - x : b - x;
      d = golden * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    ++out.evaluations;
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  out.x = x;
  out.fx = fx;
  out.bracket_width = b - a;
  return out;
}

}  // namespace smdpde
