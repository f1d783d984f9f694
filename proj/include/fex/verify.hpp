#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fex/certificate.hpp"
#include "fex/measure.hpp"
#include "fex/positivity.hpp"
#include "fex/sup_norm.hpp"

namespace fex {

struct VerifyTolerances {
  double support = 1e-6;  // condition (ii): max |H| on the support
  double sign = 1e-9;     // condition (iii): sign(coeff) * mu^(lambda) floor
  double lambda = 1e-6;   // Lambda membership, relative to the sup-norm
  double sup_window = 0.0;  // 0 = auto
  double margin_tol = 0.0;
};

struct CertificateReport {
  PositivityReport h_nonneg;
  bool h_grid_only = false;  // FromLP certificates: H checked on the grid only
  double r_cut = 0.0;
  double support_residual = 0.0;
  double support_allowance = 0.0;  // tol.support + tail_bound
  double sign_condition_margin = 0.0;
  double lambda_membership_residual = 0.0;  // relative to sup
  double sup_norm_value = 0.0;
  bool positive_fourier_mode = false;
  double fourier_nonneg_min = 0.0;  // min mu^ over the scan grid (Psi5 mode)
  bool pass_h = false, pass_support = false, pass_sign = false, pass_lambda = false;
  bool pass = false;
  std::string failed_condition;
};

namespace detail {

inline std::vector<double> support_samples(const RadialMeasure& mu) {
  std::vector<double> xs;
  if (mu.exemplar_tag() && *mu.exemplar_tag() == Exemplar::UnitSphere3D) {
    xs.push_back(1.0);
    return xs;
  }
  if (mu.exemplar_tag()) {
    double R = mu.support_radius();
    int n = 4096;
    for (int i = 0; i <= n; ++i) xs.push_back(R * i / n);
    return xs;
  }
  for (const auto& a : mu.atoms()) xs.push_back(a.radius);
  const auto& nd = mu.density();
  for (std::size_t i = 0; i < nd.size(); ++i) {
    xs.push_back(nd[i].radius);
    if (i + 1 < nd.size()) xs.push_back(0.5 * (nd[i].radius + nd[i + 1].radius));
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

inline bool candidate_is_atomic(const RadialMeasure& mu) {
  if (mu.exemplar_tag()) return *mu.exemplar_tag() == Exemplar::UnitSphere3D;
  return !mu.atoms().empty() && mu.density().empty();
}

/// Contact order of H at the support edge: linear kink or quadratic touch,
/// probed one zero_radius to the right.
inline int detect_contact_order(const Certificate& cert, double x0, double r0) {
  double probe = cert.eval_H(x0 + r0);
  double thresh = std::max(1.0, cert.c_poly) * std::pow(r0, 1.5);
  return (probe > thresh) ? 1 : 2;
}

}  // namespace detail

/// Verifies the extremality conditions for `candidate` against `cert`:
///   (i)  H >= 0 (branch-and-bound on [0, r_cut], polynomial dominance beyond),
///   (ii) H = 0 on the support of the candidate (up to tail + tolerance),
///   (iii) sign(coeff) * mu^(lambda) >= 0, plus Lambda membership of every
///         term frequency. Psi5 certificates verify the positive-Fourier
///         variant: negative-coefficient terms must sit where mu^ vanishes
///         and mu^ >= 0 is scanned on a grid.
inline CertificateReport verify_certificate(const Certificate& cert,
                                            const RadialMeasure& candidate,
                                            const Triple& trip,
                                            const VerifyTolerances& tol = {}) {
  if (cert.dim != trip.dim || candidate.dim() != trip.dim)
    throw std::invalid_argument("verify_certificate: dimension mismatch");
  if (cert.alpha != trip.alpha)
    throw std::invalid_argument("verify_certificate: certificate alpha mismatch");

  CertificateReport rep;
  rep.positive_fourier_mode = (cert.family == CertFamily::Psi5);
  double tv = total_variation(candidate);
  double supp_end = candidate.support_radius();

  // sup-norm of the candidate (windowed scan; exemplars certify their tails)
  double lam_max = 0.0;
  for (const auto& t : cert.terms) lam_max = std::max(lam_max, t.lambda);
  SupNormOptions sopt;
  sopt.window = (tol.sup_window > 0.0)
                    ? tol.sup_window
                    : std::max({24.0, 1.5 * lam_max, (supp_end > 0) ? 40.0 / supp_end : 0.0});
  sopt.rel_tol = 1e-11;
  sopt.accept_uncertified = true;
  SupNormResult sn = weighted_sup_norm(candidate, trip.beta, sopt);
  rep.sup_norm_value = sn.value;

  // conditions (iii) and Lambda membership
  double sign_margin = std::numeric_limits<double>::infinity();
  double lam_resid = 0.0;
  for (const auto& t : cert.terms) {
    if (t.coeff == 0.0) continue;
    double mh = fourier_at(candidate, t.lambda);
    double s = (t.coeff > 0.0) ? 1.0 : -1.0;
    sign_margin = std::min(sign_margin, s * mh);
    double weighted = std::fabs(mh) * std::pow(t.lambda, trip.beta);
    if (rep.positive_fourier_mode && t.coeff < 0.0) {
      // dropped term: its contribution must vanish on the candidate
      lam_resid = std::max(lam_resid, weighted / sn.value);
    } else if (sn.unbounded) {
      lam_resid = std::numeric_limits<double>::infinity();
    } else {
      lam_resid = std::max(lam_resid, std::fabs(weighted - sn.value) / sn.value);
    }
  }
  rep.sign_condition_margin = sign_margin;
  rep.lambda_membership_residual = lam_resid;
  rep.pass_sign = sign_margin >= -tol.sign * tv;
  rep.pass_lambda = lam_resid <= tol.lambda;

  if (rep.positive_fourier_mode) {
    double fmin = std::numeric_limits<double>::infinity();
    double R = std::max(supp_end, 1e-3);
    double step = std::min(0.01, 1.0 / (8.0 * R));
    for (double t = step; t <= sopt.window; t += step)
      fmin = std::min(fmin, fourier_at(candidate, t));
    rep.fourier_nonneg_min = fmin;
    if (fmin < -tol.sign * tv) rep.pass_sign = false;
  }

  // condition (ii): H on the support
  double resid = 0.0;
  for (double x : detail::support_samples(candidate))
    resid = std::max(resid, std::fabs(cert.eval_H(x)));
  rep.support_residual = resid;
  rep.support_allowance = tol.support + cert.tail_bound;
  rep.pass_support = resid <= rep.support_allowance;

  // condition (i): H >= 0
  rep.r_cut = cert.r_cut(std::max(1.0, supp_end));
  PositivityOptions popt;
  popt.margin_tol = tol.margin_tol;
  if (cert.family == CertFamily::FromLP) {
    // discrete certificate: H is asserted at support samples and midpoints
    rep.h_grid_only = true;
    auto xs = detail::support_samples(candidate);
    double hmin = std::numeric_limits<double>::infinity();
    for (double x : xs) hmin = std::min(hmin, cert.eval_H(x));
    rep.h_nonneg.certified = hmin >= -rep.support_allowance;
    rep.h_nonneg.min_margin = hmin;
    rep.h_nonneg.intervals_checked = static_cast<long>(xs.size());
  } else if (detail::candidate_is_atomic(candidate)) {
    BoundedFunction f;
    f.eval = [&](double x) { return cert.eval_H(x); };
    f.lipschitz = [&](double a, double b) { return cert.h_lipschitz(a, b); };
    for (const auto& x : detail::support_samples(candidate))
      f.zeros.push_back({x, detail::detect_contact_order(cert, x, popt.zero_radius)});
    if (cert.eval_H(0.0) < 1e-6) f.zeros.insert(f.zeros.begin(), {0.0, 2});
    rep.h_nonneg = certify_nonneg(f, 0.0, rep.r_cut, popt);
  } else {
    // absolutely continuous part fills [0, supp_end]; (ii) covers it and the
    // certification runs from the support edge outward
    BoundedFunction f;
    f.eval = [&](double x) { return cert.eval_H(x); };
    f.lipschitz = [&](double a, double b) { return cert.h_lipschitz(a, b); };
    f.zeros.push_back({supp_end, detail::detect_contact_order(cert, supp_end, popt.zero_radius)});
    rep.h_nonneg = certify_nonneg(f, supp_end, rep.r_cut, popt);
  }
  rep.pass_h = rep.h_nonneg.certified;

  rep.pass = rep.pass_h && rep.pass_support && rep.pass_sign && rep.pass_lambda;
  if (!rep.pass_support) rep.failed_condition = "support";
  else if (!rep.pass_sign) rep.failed_condition = "sign";
  else if (!rep.pass_lambda) rep.failed_condition = "lambda_membership";
  else if (!rep.pass_h) rep.failed_condition = "nonnegativity";
  return rep;
}

// ---------------------------------------------------------------------------
// Non-radial candidates (the perturbed-triangle family) and the sharp
// averaging inequality
// ---------------------------------------------------------------------------

/// A full-line d=1 density sampled on an ascending grid, piecewise linear
/// in between; may dip negative (that is what gets checked).
struct SampledDensity {
  std::vector<double> x, v;

  void validate() const {
    if (x.size() != v.size() || x.size() < 2)
      throw std::invalid_argument("SampledDensity: need matching grids, >= 2 nodes");
    for (std::size_t i = 1; i < x.size(); ++i)
      if (!(x[i] > x[i - 1]))
        throw std::invalid_argument("SampledDensity: grid must be increasing");
  }

  double integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      s += 0.5 * (v[i] + v[i + 1]) * (x[i + 1] - x[i]);
    return s;
  }

  double abs_moment(double alpha) const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      s += gl16(
          [&](double t) {
            double w = (t - x[i]) / (x[i + 1] - x[i]);
            return (v[i] + w * (v[i + 1] - v[i])) * std::pow(std::fabs(t), alpha);
          },
          x[i], x[i + 1]);
    return s;
  }

  /// Exact Fourier transform of the piecewise-linear interpolant.
  std::complex<double> fourier(double xi) const {
    if (xi == 0.0) return {integral(), 0.0};
    double om = two_pi * xi;
    std::complex<double> F{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      double h = x[i + 1] - x[i];
      double xm = 0.5 * (x[i] + x[i + 1]);
      double z = 0.5 * om * h;
      double slope = (v[i + 1] - v[i]) / h;
      double mid = 0.5 * (v[i] + v[i + 1]);
      double I0 = h * sinc(z);
      double J = (std::fabs(z) < 1e-4)
                     ? (z * z * z / 3.0 - std::pow(z, 5) / 30.0) / (om * om)
                     : (std::sin(z) - z * std::cos(z)) / (om * om);
      std::complex<double> I1{0.0, -2.0 * J};
      F += std::polar(1.0, -om * xm) * (mid * I0 + slope * I1);
    }
    return F;
  }
};

/// mu^ of the odd perturbation phi = sin(2 pi x) 1_{[-1,1]} (purely imaginary).
inline double phi_hat_imag(double xi) {
  return -(sinc(two_pi * (1.0 - xi)) - sinc(two_pi * (1.0 + xi)));
}

inline SampledDensity make_f2_tilde(double eps, int n = 100'000) {
  SampledDensity d;
  d.x.reserve(n + 1);
  d.v.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    double x = -1.0 + 2.0 * i / n;
    d.x.push_back(x);
    d.v.push_back((1.0 - std::fabs(x)) + eps * std::sin(two_pi * x));
  }
  return d;
}

struct OtherExtremizerReport {
  bool nonneg = false;
  double min_value = 0.0, min_location = 0.0;
  double l1 = 0.0, l1_ref = 0.0;
  double sup = 0.0, sup_ref = 0.0;
  double eps_hat = 0.0;
  double support_residual = 0.0;    // condition (a)
  double b_residual = 0.0;          // condition (b), max over terms
  double fe_identity_residual = 0.0;
  double max_location_drift = 0.0;
  double functional_value = 0.0;
  bool pass = false;
  std::string failure;
};

/// Conditions (a)-(b) for a (possibly non-even) nonnegative candidate
/// against a verified certificate and reference measure, plus the modulus
/// identity |mu^|^2 = f2^^2 + eps^2 |phi^|^2 of the non-uniqueness family.
inline OtherExtremizerReport verify_other_extremizer(const Certificate& cert,
                                                     const SampledDensity& cand,
                                                     const RadialMeasure& reference,
                                                     const Triple& trip) {
  cand.validate();
  OtherExtremizerReport rep;

  rep.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cand.x.size(); ++i) {
    if (cand.v[i] < rep.min_value) {
      rep.min_value = cand.v[i];
      rep.min_location = cand.x[i];
    }
  }
  rep.nonneg = rep.min_value >= -1e-12;
  if (!rep.nonneg) {
    rep.failure = "negativity";
    return rep;
  }

  rep.l1 = cand.integral();  // = ||cand||_1 once nonnegativity holds
  rep.l1_ref = total_variation(reference);

  auto weighted = [&](double xi) {
    return std::abs(cand.fourier(xi)) * std::pow(xi, trip.beta);
  };
  auto maxima = scan_local_maxima(weighted, 12.0, 0.05, 1e-11);
  for (const auto& m : maxima) rep.sup = std::max(rep.sup, m.value);
  SupNormOptions sopt;
  sopt.accept_uncertified = true;
  rep.sup_ref = weighted_sup_norm(reference, trip.beta, sopt).value;

  if (std::fabs(rep.l1 - rep.l1_ref) > 1e-6 * rep.l1_ref ||
      std::fabs(rep.sup - rep.sup_ref) > 1e-6 * rep.sup_ref) {
    rep.failure = "norm_mismatch";
    return rep;
  }

  // eps recovered from the odd projection onto sin(2 pi x)
  double num = 0.0;
  for (std::size_t i = 0; i + 1 < cand.x.size(); ++i)
    num += gl16(
        [&](double t) {
          double w = (t - cand.x[i]) / (cand.x[i + 1] - cand.x[i]);
          return (cand.v[i] + w * (cand.v[i + 1] - cand.v[i])) * std::sin(two_pi * t);
        },
        cand.x[i], cand.x[i + 1]);
  rep.eps_hat = num;  // int sin^2(2 pi x) over [-1,1] = 1

  // (a) H vanishes on the support
  for (std::size_t i = 0; i < cand.x.size(); ++i)
    if (cand.v[i] > 1e-14)
      rep.support_residual =
          std::max(rep.support_residual, std::fabs(cert.eval_H(std::fabs(cand.x[i]))));

  // (b) c_lambda |xi|^beta mu^(xi) = |c_lambda| sup at every term frequency
  for (const auto& t : cert.terms) {
    std::complex<double> mh = cand.fourier(t.lambda);
    std::complex<double> lhs = t.coeff * std::pow(t.lambda, trip.beta) * mh;
    double rhs = std::fabs(t.coeff) * rep.sup;
    rep.b_residual = std::max(rep.b_residual, std::abs(lhs - rhs) / rhs);
  }

  // modulus identity and max-location stability on [k, k+1]
  for (int i = 1; i <= 200; ++i) {
    double xi = 8.0 * i / 200.0;
    double lhs = std::norm(cand.fourier(xi));
    double f2h = sinc(pi * xi) * sinc(pi * xi);
    double rhs = f2h * f2h + rep.eps_hat * rep.eps_hat * phi_hat_imag(xi) * phi_hat_imag(xi);
    rep.fe_identity_residual = std::max(rep.fe_identity_residual, std::fabs(lhs - rhs));
  }
  auto F = [&](double xi) { return std::pow(xi, 4) * std::norm(cand.fourier(xi)); };
  for (int k = 0; k <= 5; ++k) {
    ScanMax m = golden_max(F, k + 0.05, k + 1.0, 1e-11);
    double center = k + 0.5;
    double drift = std::fabs(m.t - center);
    if (m.value <= F(center) * (1.0 + 1e-10)) drift = 0.0;
    rep.max_location_drift = std::max(rep.max_location_drift, drift);
  }

  rep.functional_value = std::pow(rep.sup, trip.alpha) *
                         std::pow(cand.abs_moment(trip.alpha), trip.beta) /
                         std::pow(rep.l1, trip.alpha + trip.beta);

  bool conds = rep.support_residual <= 1e-6 + cert.tail_bound &&
               rep.b_residual <= 1e-6 && rep.fe_identity_residual <= 1e-8 &&
               rep.max_location_drift <= 1e-5;
  if (!conds) rep.failure = "slackness";
  rep.pass = conds;
  return rep;
}

struct AveragingCheckCase {
  double lhs = 0.0, rhs = 0.0, gap = 0.0;
  bool holds = false;
};

struct AveragingCheckReport {
  std::vector<AveragingCheckCase> cases;
  bool all_hold = false;
};

/// int f (1-4x^2) <= (2 pi /3) ||f^(xi) xi||_inf for even densities on
/// [-1/2, 1/2], with equality for the box.
inline AveragingCheckReport sharp_averaging_check(const std::vector<std::function<double(double)>>& fs) {
  AveragingCheckReport rep;
  rep.all_hold = true;
  for (const auto& f : fs) {
    AveragingCheckCase c;
    c.lhs = 2.0 * integrate([&](double x) { return f(x) * (1.0 - 4.0 * x * x); },
                            0.0, 0.5, 1e-13);
    auto weighted = [&](double xi) {
      double v = 2.0 * integrate_oscillatory(
                           [&](double x) { return f(x) * std::cos(two_pi * xi * x); },
                           0.0, 0.5, (xi > 0) ? 1.0 / xi : 1.0);
      return std::fabs(v) * xi;
    };
    double sup = 0.0;
    for (const auto& m : scan_local_maxima(weighted, 24.0, 0.1, 1e-10))
      sup = std::max(sup, m.value);
    c.rhs = two_pi / 3.0 * sup;
    c.gap = c.rhs - c.lhs;
    c.holds = c.gap >= -1e-9;
    rep.all_hold = rep.all_hold && c.holds;
    rep.cases.push_back(c);
  }
  return rep;
}

}  // namespace fex
