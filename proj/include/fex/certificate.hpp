#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fex/constants.hpp"
#include "fex/quadrature.hpp"
#include "fex/special.hpp"

namespace fex {

enum class CertFamily { Psi1, Psi2, Psi3, Sphere, Psi5, FromLP };

inline const char* cert_family_name(CertFamily f) {
  switch (f) {
    case CertFamily::Psi1: return "Psi1";
    case CertFamily::Psi2: return "Psi2";
    case CertFamily::Psi3: return "Psi3";
    case CertFamily::Sphere: return "Sphere";
    case CertFamily::Psi5: return "Psi5";
    case CertFamily::FromLP: return "FromLP";
  }
  return "?";
}

inline CertFamily cert_family_from_name(const std::string& s) {
  if (s == "Psi1") return CertFamily::Psi1;
  if (s == "Psi2") return CertFamily::Psi2;
  if (s == "Psi3") return CertFamily::Psi3;
  if (s == "Sphere") return CertFamily::Sphere;
  if (s == "Psi5") return CertFamily::Psi5;
  if (s == "FromLP") return CertFamily::FromLP;
  throw std::invalid_argument("unknown certificate family: " + s);
}

struct CertTerm {
  double lambda;  // sphere radius in frequency space, > 0
  double coeff;   // signed weight of the unnormalized sphere transform
};

/// Fourier transform of the unnormalized uniform sphere measure of radius
/// lambda, as a function of the spatial radius x:
///   d=1: 2 cos(2 pi lambda x),  d=3: 2 lambda sin(2 pi lambda x)/x.
inline double sphere_transform(int dim, double lambda, double x) {
  return std::pow(lambda, dim - 1) * sphere_surface(dim) * sphere_kernel_s(dim, lambda * x);
}

/// Interval Lipschitz bound for sphere_transform(dim, lambda, .) on [a,b].
inline double sphere_transform_lipschitz(int dim, double lambda, double a, double b) {
  double c = two_pi * lambda;
  switch (dim) {
    case 1: return 2.0 * c;
    case 2: return two_pi * lambda * c * 0.5819;  // |J1| <= 0.5819
    case 3: {
      // |d/dx sin(cx)/x| = c^2 |t cos t - sin t|/t^2, t = cx,
      // and |t cos t - sin t| <= min(t^3/3, 1 + t).
      double rising = c * c * c * b / 3.0;
      double falling = (a > 0.0) ? (1.0 + c * b) / (a * a)
                                 : std::numeric_limits<double>::infinity();
      return 2.0 * lambda * std::min(rising, falling);
    }
    default: throw std::invalid_argument("sphere_transform_lipschitz: dims 1..3");
  }
}

/// Dual extremality object: H(x) = psi(x) + C |x|^alpha - D
/// with psi a finite combination of sphere transforms plus a certified tail.
struct Certificate {
  int dim = 1;
  double alpha = 2.0;
  std::vector<CertTerm> terms;
  double c_poly = 1.0;   // C > 0
  double d_const = 0.0;  // D
  double tail_bound = 0.0;
  CertFamily family = CertFamily::FromLP;

  double eval_psi(double x) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.coeff * sphere_transform(dim, t.lambda, x);
    return s;
  }

  double eval_H(double x) const {
    return eval_psi(x) + c_poly * std::pow(std::fabs(x), alpha) - d_const;
  }

  /// sup |psi| <= sum |coeff| * lambda^{d-1} * omega_{d-1} + tail.
  double psi_sup_bound() const {
    double s = tail_bound;
    for (const auto& t : terms)
      s += std::fabs(t.coeff) * std::pow(t.lambda, dim - 1) * sphere_surface(dim);
    return s;
  }

  double psi_lipschitz(double a, double b) const {
    double s = 0.0;
    for (const auto& t : terms)
      s += std::fabs(t.coeff) * sphere_transform_lipschitz(dim, t.lambda, a, b);
    return s;
  }

  /// Lipschitz bound for H on [a,b] (alpha >= 1 assumed, as in every family).
  double h_lipschitz(double a, double b) const {
    double poly = c_poly * alpha *
                  std::max(std::pow(a, alpha - 1.0), std::pow(b, alpha - 1.0));
    return psi_lipschitz(a, b) + poly;
  }

  /// Smallest doubling radius beyond which C x^alpha - D dominates sup|psi|,
  /// so H > 0 out there by monotonicity.
  double r_cut(double start = 1.0, double margin = 1e-6) const {
    double S = psi_sup_bound() + std::fabs(d_const);
    double R = std::max(start, 1.0);
    for (int i = 0; i < 200; ++i) {
      if (c_poly * std::pow(R, alpha) - S > margin) return R;
      R *= 2.0;
    }
    throw std::runtime_error("Certificate::r_cut: no dominance radius found");
  }
};

/// First-kind certificate for the box extremizer at beta = 1. The stored
/// coefficient is against the unnormalized kernel 2 cos(2 pi lambda x):
///   c_k = 2 int_0^{1/2} (1-(2x)^alpha) cos(2 pi (k+1/2) x) dx,
/// i.e. (16/pi^3)(-1)^k/(2k+1)^3 at alpha = 2, which makes
/// psi1 = 1 - |2x|^alpha on [-1/2, 1/2]. H = psi1 + |2x|^alpha - 1.
inline double psi1_coefficient(double alpha, int k) {
  if (alpha == 2.0) {
    double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    double m = 2.0 * k + 1.0;
    return 16.0 / (pi * pi * pi) * sgn / (m * m * m);
  }
  double freq = two_pi * (k + 0.5);
  return 2.0 * integrate_oscillatory(
                   [&](double x) { return (1.0 - std::pow(2.0 * x, alpha)) * std::cos(freq * x); },
                   0.0, 0.5, two_pi / freq);
}

/// Integration-by-parts constant: |c_k^(alpha)| <= K_alpha / (k+1/2)^3,
/// from ||g'''||_1 = 4 alpha (alpha-1) for g = 1-(2x)^alpha.
inline double psi1_coefficient_bound(double alpha) {
  return 2.0 * alpha * (alpha - 1.0) / (pi * pi * pi);
}

inline Certificate build_psi1(double alpha, int num_terms = 200) {
  if (!(alpha >= 2.0))
    throw std::domain_error("build_psi1: requires alpha >= 2 (sign pattern needs g''' single-signed)");
  if (num_terms < 1) throw std::invalid_argument("build_psi1: num_terms >= 1");
  Certificate c;
  c.dim = 1;
  c.alpha = alpha;
  c.c_poly = std::pow(2.0, alpha);
  c.d_const = 1.0;
  c.family = CertFamily::Psi1;
  for (int k = 0; k < num_terms; ++k)
    c.terms.push_back({k + 0.5, psi1_coefficient(alpha, k)});
  double N = num_terms;
  double K = psi1_coefficient_bound(alpha);
  c.tail_bound = 2.0 * K * (std::pow(N + 0.5, -3.0) + 0.5 * std::pow(N + 0.5, -2.0));
  return c;
}

struct SignCheckReport {
  bool pass = false;
  double min_normalized = 0.0;  // min over k of (-1)^k c_k (k+1/2)^3
  double max_normalized = 0.0;
  double bound = 0.0;  // K_alpha
  int checked_terms = 0;
  int first_violation = -1;
};

/// Checks the alternating-sign pattern (-1)^k c_k^(alpha) (k+1/2)^3 in (0, K].
inline SignCheckReport coefficient_sign_check(double alpha, int num_terms) {
  if (!(alpha >= 2.0)) throw std::domain_error("coefficient_sign_check: alpha >= 2");
  SignCheckReport rep;
  rep.bound = psi1_coefficient_bound(alpha) * (1.0 + 1e-9);
  rep.checked_terms = num_terms;
  rep.min_normalized = std::numeric_limits<double>::infinity();
  rep.max_normalized = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < num_terms; ++k) {
    double n = psi1_coefficient(alpha, k) * ((k % 2 == 0) ? 1.0 : -1.0) *
               std::pow(k + 0.5, 3.0);
    rep.min_normalized = std::min(rep.min_normalized, n);
    rep.max_normalized = std::max(rep.max_normalized, n);
    if (!(n > 0.0 && n <= rep.bound) && rep.first_violation < 0)
      rep.first_violation = k;
  }
  rep.pass = rep.first_violation < 0;
  return rep;
}

/// Certificate for the triangle extremizer at (1,2,1):
/// c_lambda = (2/pi^2)/(2k+1)^2 at lambda = k+1/2; H = psi2 + |x| - 1/2.
inline Certificate build_psi2(int num_terms = 200) {
  Certificate c;
  c.dim = 1;
  c.alpha = 1.0;
  c.c_poly = 1.0;
  c.d_const = 0.5;
  c.family = CertFamily::Psi2;
  for (int k = 0; k < num_terms; ++k) {
    double m = 2.0 * k + 1.0;
    c.terms.push_back({k + 0.5, 2.0 / (pi * pi * m * m)});
  }
  double M = 2.0 * num_terms + 1.0;
  c.tail_bound = (4.0 / (pi * pi)) * (1.0 / (M * M) + 0.5 / M);
  return c;
}

/// Certificate for the inverse-radius extremizer at (1,2,3):
/// coeff = (4/pi^3) * 2/(2k+1)^4 at lambda = k+1/2; H = psi3 + |x| - 1.
inline Certificate build_psi3(int num_terms = 50) {
  Certificate c;
  c.dim = 3;
  c.alpha = 1.0;
  c.c_poly = 1.0;
  c.d_const = 1.0;
  c.family = CertFamily::Psi3;
  for (int k = 0; k < num_terms; ++k) {
    double m = 2.0 * k + 1.0;
    c.terms.push_back({k + 0.5, 8.0 / (pi * pi * pi * m * m * m * m)});
  }
  // each term is bounded by |coeff| * 4 pi lambda^2
  double M = 2.0 * num_terms + 1.0;
  c.tail_bound = (8.0 / (pi * pi)) * (1.0 / (M * M) + 0.5 / M);
  return c;
}

/// Finite sphere certificate for the unit-sphere extremizer in d=3:
/// H = A * sphere_transform(lambda_beta) + |x|^alpha - B with
/// A = alpha/(2 lambda beta sin(2 pi lambda)), B = alpha/beta + 1.
inline Certificate build_sphere_certificate(double alpha, double beta) {
  bool covered = (beta == 1.0 && alpha >= sphere_alpha_threshold()) ||
                 (alpha >= 2.0 && beta > 0.0 && beta < 1.0);
  if (!covered)
    throw std::domain_error("build_sphere_certificate: (alpha,beta) outside the covered region");
  double l = lambda_beta(beta);
  double A = alpha / (2.0 * l * beta * std::sin(two_pi * l));
  Certificate c;
  c.dim = 3;
  c.alpha = alpha;
  c.c_poly = 1.0;
  c.d_const = alpha / beta + 1.0;
  c.family = CertFamily::Sphere;
  c.terms.push_back({l, A});
  c.tail_bound = 0.0;
  return c;
}

/// a_j = int_{-1}^{1} (1-3x^2) cos(pi j x) dx = 12 (-1)^{j+1}/(pi^2 j^2), j >= 1.
inline double psi5_a(int j) {
  double sgn = (j % 2 == 1) ? 1.0 : -1.0;
  return 12.0 * sgn / (pi * pi * j * j);
}

/// Positive-Fourier certificate for the triangle at (2,2,1):
/// psi5(x) = sum_j a_j cos(pi j x), stored as lambda = j/2 sphere terms with
/// halved coefficients; H = psi5 + 3 x^2 - 1.
inline Certificate build_psi5(int num_terms = 200) {
  Certificate c;
  c.dim = 1;
  c.alpha = 2.0;
  c.c_poly = 3.0;
  c.d_const = 1.0;
  c.family = CertFamily::Psi5;
  for (int j = 1; j <= num_terms; ++j) c.terms.push_back({0.5 * j, 0.5 * psi5_a(j)});
  c.tail_bound = (12.0 / (pi * pi)) / num_terms;
  return c;
}

}  // namespace fex
