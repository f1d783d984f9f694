#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "fex/special.hpp"

namespace fex {

/// 16-point Gauss-Legendre on [a,b].
template <typename F>
double gl16(F&& f, double a, double b) {
  double h = b - a, sum = 0.0;
  for (int i = 0; i < 16; ++i)
    sum += detail::gl16_weights[i] * f(a + h * detail::gl16_nodes[i]);
  return sum * h;
}

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename F>
double adaptive_gl_rec(F& f, double a, double b, double whole, double tol,
                       int depth) {
  double m = 0.5 * (a + b);
  double left = gl16(f, a, m), right = gl16(f, m, b);
  double err = std::fabs(left + right - whole);
  if (err < tol || (b - a) < 1e-14 * (1.0 + std::fabs(a)))
    return left + right;
  if (depth <= 0)
    throw QuadratureError("adaptive quadrature: refinement limit reached");
  return adaptive_gl_rec(f, a, m, left, 0.5 * tol, depth - 1) +
         adaptive_gl_rec(f, m, b, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Legendre by interval bisection to absolute tolerance.
template <typename F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                 int max_depth = 48) {
  if (!(b > a)) return 0.0;
  double tol = std::max(abs_tol, 1e-16);
  return detail::adaptive_gl_rec(f, a, b, gl16(f, a, b), tol, max_depth);
}

/// Integrate f over [a,b] when f oscillates on scale `period`: the interval
/// is pre-split into panels no longer than a quarter period, GL16 each.
/// Exact to near machine precision for smooth-times-trigonometric factors.
template <typename F>
double integrate_oscillatory(F&& f, double a, double b, double period) {
  if (!(b > a)) return 0.0;
  double panel = (period > 0.0) ? 0.25 * period : (b - a);
  int n = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
  if (n > 4'000'000) throw QuadratureError("oscillatory quadrature: too many panels");
  double h = (b - a) / n, sum = 0.0;
  for (int i = 0; i < n; ++i) sum += gl16(f, a + i * h, a + (i + 1) * h);
  return sum;
}

}  // namespace fex
