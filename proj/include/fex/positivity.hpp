#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fex/constants.hpp"
#include "fex/special.hpp"

namespace fex {

/// A point where the function is permitted to touch zero: order 1 means a
/// kink contact with positive one-sided slope, order 2 a quadratic contact.
struct DeclaredZero {
  double location;
  int order;  // 1 or 2
};

/// A function on an interval together with a valid interval Lipschitz bound.
struct BoundedFunction {
  std::function<double(double)> eval;
  std::function<double(double, double)> lipschitz;  // bound on [a,b]
  std::vector<DeclaredZero> zeros;                  // sorted by location
};

struct PositivityOptions {
  double margin_tol = 0.0;      // required certified margin away from zeros
  double zero_radius = 1e-3;    // local-criterion neighborhood radius
  double safety = 1e-9;         // subtracted from every certified lower bound
  double zero_floor = 1e-13;    // tolerated rounding dip at neighborhood samples
  int max_depth = 60;
  long max_intervals = 4'000'000;
};

struct FailInterval {
  double a, b;
};

struct PositivityReport {
  bool certified = false;
  double min_margin = std::numeric_limits<double>::infinity();
  double zero_neighborhood_radius = 0.0;
  long intervals_checked = 0;
  std::vector<FailInterval> failures;
  double min_zero_growth = std::numeric_limits<double>::infinity();
};

namespace detail {

struct BnbState {
  const BoundedFunction* f;
  const PositivityOptions* opt;
  PositivityReport* rep;
  long budget;
};

inline void bnb_interval(BnbState& st, double a, double b, int depth) {
  if (st.rep->failures.size() > 64) return;  // enough evidence
  if (--st.budget < 0) {
    st.rep->failures.push_back({a, b});
    return;
  }
  st.rep->intervals_checked++;
  double mid = 0.5 * (a + b);
  double fm = st.f->eval(mid);
  if (fm < -st.opt->zero_floor) {  // witnessed negativity, no need to descend
    st.rep->failures.push_back({a, b});
    return;
  }
  double L = st.f->lipschitz(a, b);
  double lb = fm - 0.5 * L * (b - a) - st.opt->safety;
  if (lb >= st.opt->margin_tol) {
    st.rep->min_margin = std::min(st.rep->min_margin, lb);
    return;
  }
  if (depth >= st.opt->max_depth) {
    st.rep->failures.push_back({a, b});
    return;
  }
  bnb_interval(st, a, mid, depth + 1);
  bnb_interval(st, mid, b, depth + 1);
}

/// Sampled local criterion around a declared zero: nonnegativity at the
/// samples plus a positive difference quotient of the declared order.
inline bool zero_local_check(const BoundedFunction& f, const DeclaredZero& z,
                             double a, double b, const PositivityOptions& opt,
                             double& min_growth) {
  double r = opt.zero_radius;
  double f0 = f.eval(z.location);
  double scale = std::max(1.0, std::fabs(f0));
  std::vector<std::pair<double, double>> samples;  // (offset, value)
  for (int side = -1; side <= 1; side += 2) {
    for (int i = 1; i <= 8; ++i) {
      double x = z.location + side * r * i / 8.0;
      if (x < a - 1e-15 || x > b + 1e-15) continue;
      double v = f.eval(x);
      scale = std::max(scale, std::fabs(v));
      samples.push_back({side * r * i / 8.0, v});
    }
  }
  if (samples.empty()) return true;
  double floor = opt.zero_floor * scale;
  if (f0 < -floor) return false;
  bool ok = true;
  for (const auto& [h, v] : samples) {
    if (v < -floor) ok = false;
    double q = (v - std::max(f0, 0.0)) / std::pow(std::fabs(h), z.order);
    min_growth = std::min(min_growth, q);
    if (!(q > 0.0)) ok = false;
  }
  return ok;
}

}  // namespace detail

/// Certifies f >= 0 on [a,b] by adaptive bisection with interval Lipschitz
/// bounds; declared zeros are handled by a sampled local criterion on a
/// fixed neighborhood. Failure intervals are reported instead of guessed.
inline PositivityReport certify_nonneg(const BoundedFunction& f, double a, double b,
                                       const PositivityOptions& opt = {}) {
  if (!(a < b)) throw std::invalid_argument("certify_nonneg: need a < b");
  PositivityReport rep;
  rep.zero_neighborhood_radius = opt.zero_radius;
  detail::BnbState st{&f, &opt, &rep, opt.max_intervals};

  double cursor = a;
  bool zeros_ok = true;
  for (const auto& z : f.zeros) {
    if (z.location < a - opt.zero_radius || z.location > b + opt.zero_radius) continue;
    if (!detail::zero_local_check(f, z, a, b, opt, rep.min_zero_growth)) {
      zeros_ok = false;
      rep.failures.push_back({z.location - opt.zero_radius, z.location + opt.zero_radius});
    }
    double lo = std::max(a, z.location - opt.zero_radius);
    double hi = std::min(b, z.location + opt.zero_radius);
    if (lo > cursor) detail::bnb_interval(st, cursor, lo, 0);
    cursor = std::max(cursor, hi);
  }
  if (cursor < b) detail::bnb_interval(st, cursor, b, 0);
  rep.certified = zeros_ok && rep.failures.empty();
  if (rep.intervals_checked == 0 && !std::isfinite(rep.min_margin))
    rep.min_margin = 0.0;  // whole interval swallowed by zero neighborhoods
  return rep;
}

// ---------------------------------------------------------------------------
// Appendix checks
// ---------------------------------------------------------------------------

struct TanBoundsReport {
  bool pass = false;
  double min_margin_upper = 0.0;  // min of 1 - x^2/3 - x/tan x on the BnB region
  double min_margin_lower = 0.0;  // min of x/tan x - 2 sqrt(1-x^2/3) + 1
  double series_floor_upper = 0.0;
  double series_floor_lower = 0.0;
  double value_at_right_upper = 0.0;  // 1 - (pi/2)^2/3, above the limit 0
  double value_at_right_lower = 0.0;  // 2 sqrt(1-(pi/2)^2/3) - 1, below 0
  PositivityReport upper, lower;
};

/// x cot x, smooth on (0, pi); series 1 - x^2/3 - x^4/45 - ... near 0.
inline double x_cot_x(double x) {
  if (std::fabs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x * std::cos(x) / std::sin(x);
}

/// Certifies 1 - x^2/3 >= x/tan x >= 2 sqrt(1-x^2/3) - 1 on [0, pi/2].
/// Branch-and-bound on [0.4, pi/2]; on (0, 0.4] the cotangent series gives
/// the analytic floors x^4/45 and x^4/360 for the two differences, which n
/// sample points re-check directly.
inline TanBoundsReport check_tan_bounds(int n_points = 200) {
  if (n_points < 10) throw std::invalid_argument("check_tan_bounds: n >= 10");
  TanBoundsReport rep;
  const double x0 = 0.4, x1 = pi / 2.0;

  BoundedFunction d1{
      [](double x) { return 1.0 - x * x / 3.0 - x_cot_x(x); },
      [](double a, double b) {
        return 2.0 * b / 3.0 + (2.0 / 3.0) * b * b * b / (std::sin(a) * std::sin(a));
      },
      {}};
  BoundedFunction d2{
      [](double x) { return x_cot_x(x) - 2.0 * std::sqrt(1.0 - x * x / 3.0) + 1.0; },
      [](double a, double b) {
        return (2.0 / 3.0) * b * b * b / (std::sin(a) * std::sin(a)) +
               (2.0 * b / 3.0) / std::sqrt(1.0 - b * b / 3.0);
      },
      {}};

  PositivityOptions opt;
  opt.safety = 1e-12;
  rep.upper = certify_nonneg(d1, x0, x1, opt);
  rep.lower = certify_nonneg(d2, x0, x1, opt);
  rep.min_margin_upper = rep.upper.min_margin;
  rep.min_margin_lower = rep.lower.min_margin;
  rep.series_floor_upper = std::pow(x0, 4) / 45.0;
  rep.series_floor_lower = std::pow(x0, 4) / 360.0;
  rep.value_at_right_upper = 1.0 - x1 * x1 / 3.0;
  rep.value_at_right_lower = 2.0 * std::sqrt(1.0 - x1 * x1 / 3.0) - 1.0;

  bool series_ok = true;
  for (int i = 1; i <= n_points; ++i) {
    double x = x0 * i / n_points;
    double x4 = std::pow(x, 4);
    if (!(d1.eval(x) >= 0.99 * x4 / 45.0)) series_ok = false;
    if (!(d2.eval(x) >= 0.99 * x4 / 360.0)) series_ok = false;
  }
  rep.pass = rep.upper.certified && rep.lower.certified && series_ok &&
             rep.value_at_right_upper > 0.0 && rep.value_at_right_lower < 0.0;
  return rep;
}

struct GReport {
  bool pass = false;
  double g_at_1 = 0.0;       // residual of G(1) = 0
  double gp_at_1 = 0.0;      // residual of G'(1) = 0
  double slope_at_0 = 0.0;   // G'(0)
  double gpp_at_1 = 0.0;     // G''(1)
  double x_cut = 0.0;
  double min_margin = 0.0;
  double min_zero_growth = 0.0;
  PositivityReport positivity;
  bool probes_ok = false;
};

namespace detail {

/// Shared engine for the appendix G-functions
///   G(x) = amp * sin(freq * x) + x^{alpha+1} - B x,
/// with G(1) = G'(1) = 0 and declared zeros at 0 and 1.
inline GReport check_G(double amp, double freq, double alpha, double B, int n_points) {
  GReport rep;
  auto G = [=](double x) {
    return amp * std::sin(freq * x) + std::pow(x, alpha + 1.0) - B * x;
  };
  auto Gp = [=](double x) {
    return amp * freq * std::cos(freq * x) + (alpha + 1.0) * std::pow(x, alpha) - B;
  };
  rep.g_at_1 = G(1.0);
  rep.gp_at_1 = Gp(1.0);
  rep.slope_at_0 = amp * freq - B;
  rep.gpp_at_1 = -amp * freq * freq * std::sin(freq) + (alpha + 1.0) * alpha;

  // dominance radius: x^{alpha+1} - Bx - amp > 0 and increasing
  double X = 2.0;
  while (std::pow(X, alpha + 1.0) - B * X - std::fabs(amp) < 1e-6) X *= 2.0;
  rep.x_cut = X;

  std::vector<DeclaredZero> zeros;
  zeros.push_back({0.0, (rep.slope_at_0 > 1e-6) ? 1 : 2});
  zeros.push_back({1.0, 2});

  BoundedFunction f{
      G,
      [=](double a, double b) {
        double lo = (alpha + 1.0) * std::pow(a, alpha) - B;
        double hi = (alpha + 1.0) * std::pow(b, alpha) - B;
        return std::fabs(amp) * freq + std::max(std::fabs(lo), std::fabs(hi));
      },
      zeros};
  rep.positivity = certify_nonneg(f, 0.0, X, {});
  rep.min_margin = rep.positivity.min_margin;
  rep.min_zero_growth = rep.positivity.min_zero_growth;

  rep.probes_ok = true;
  for (int i = 1; i < n_points; ++i) {
    double x = X * i / n_points;
    if (G(x) < -1e-11) rep.probes_ok = false;
  }
  rep.pass = rep.positivity.certified && rep.probes_ok &&
             std::fabs(rep.g_at_1) < 1e-10 && std::fabs(rep.gp_at_1) < 1e-10 &&
             rep.gpp_at_1 > 0.0;
  return rep;
}

}  // namespace detail

/// Auxiliary check at beta = 1: G(x) = alpha sin(pi x/2) + x^{alpha+1} - (alpha+1)x
/// on alpha in [alpha0, 2] with alpha0 = 1/(pi/2 - 1). G(1) = G'(1) = 0 and
/// G >= 0 with zeros only at 0 and 1.
inline GReport check_G_beta1(double alpha, int n_points = 200) {
  double a0 = sphere_alpha_threshold();
  if (!(alpha >= a0 - 1e-12 && alpha <= 2.0 + 1e-12))
    throw std::domain_error("check_G_beta1: alpha must lie in [1/(pi/2-1), 2]");
  GReport rep = detail::check_G(alpha, pi / 2.0, alpha, alpha + 1.0, n_points);
  if (std::fabs(rep.g_at_1) > 1e-12 || std::fabs(rep.gp_at_1) > 1e-12) rep.pass = false;
  return rep;
}

/// General-beta check: G built from lambda_beta and the sphere-certificate
/// amplitudes, alpha >= 2, beta in (0,1]. Also verifies the strict auxiliary
/// inequalities G'(0) > 0 and G''(1) > 0.
inline GReport check_G_general(double alpha, double beta, int n_points = 200) {
  if (!(alpha >= 2.0)) throw std::domain_error("check_G_general: alpha >= 2");
  double l = lambda_beta(beta);
  double A = alpha / (2.0 * l * beta * std::sin(two_pi * l));
  double B = alpha / beta + 1.0;
  GReport rep = detail::check_G(2.0 * l * A, two_pi * l, alpha, B, n_points);
  if (!(rep.slope_at_0 > 0.0)) rep.pass = false;
  if (!(rep.gpp_at_1 > 0.0)) rep.pass = false;
  return rep;
}

}  // namespace fex
