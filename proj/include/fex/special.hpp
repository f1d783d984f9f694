#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fex {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// sin(z)/z with the removable singularity filled in by series below the
/// crossover threshold 1e-6 on the denominator.
inline double sinc(double z) {
  double az = std::fabs(z);
  if (az < 1e-6) {
    double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

namespace detail {

// Maclaurin series; alternating terms peak near 114 at x=8, so the
// absolute error stays below ~5e-14 on |x| <= 8.
inline double j0_series(double x) {
  double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-18) break;
  }
  return sum;
}

// Hankel asymptotic expansion, truncated at the smallest term. The minimum
// term at x is roughly e^{-2x}; usable to ~1e-13 only for x >= 16.
inline double j0_asymptotic(double x) {
  double p = 1.0, q = 0.0;
  double ak = 1.0;  // a_k(0) / x^k
  for (int k = 1; k <= 17; ++k) {
    double m = 2.0 * k - 1.0;
    ak *= -(m * m) / (8.0 * k * x);
    double prev = ak;
    if (k % 2 == 0)
      p += (k % 4 == 0) ? prev : -prev;
    else
      q += ((k - 1) % 4 == 0) ? -prev : prev;
    if (std::fabs(ak) < 1e-19) break;
  }
  double w = x - 0.25 * pi;
  return std::sqrt(2.0 / (pi * x)) * (p * std::cos(w) + q * std::sin(w));
}

// Gauss-Legendre 16 nodes/weights on [0,1].
inline constexpr std::array<double, 16> gl16_nodes = {
    0.0052995325041750337, 0.0277124884633837103, 0.0671843988060841224,
    0.1222977958224984868, 0.1910618777986781147, 0.2709916111713863151,
    0.3591982246103705422, 0.4524937450811812866, 0.5475062549188187134,
    0.6408017753896294578, 0.7290083888286136849, 0.8089381222013218853,
    0.8777022041775015132, 0.9328156011939158776, 0.9722875115366162897,
    0.9947004674958249663};
inline constexpr std::array<double, 16> gl16_weights = {
    0.0135762297058770482, 0.0311267619693239468, 0.0475792558412463928,
    0.0623144856277669384, 0.0747979944082883680, 0.0845782596975012679,
    0.0913017075224617918, 0.0947253052275342510, 0.0947253052275342510,
    0.0913017075224617918, 0.0845782596975012679, 0.0747979944082883680,
    0.0623144856277669384, 0.0475792558412463928, 0.0311267619693239468,
    0.0135762297058770482};

// J0(x) = (1/pi) * int_0^pi cos(x sin t) dt on composite panels sized to
// the oscillation; bridges the gap where neither the series nor the
// asymptotic expansion reaches 1e-13.
inline double j0_integral(double x) {
  int panels = 8 + static_cast<int>(x);
  double h = pi / panels, sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = p * h;
    for (int i = 0; i < 16; ++i) {
      double t = a + h * gl16_nodes[i];
      sum += gl16_weights[i] * std::cos(x * std::sin(t));
    }
  }
  return sum * h / pi;
}

}  // namespace detail

/// Bessel function of the first kind, order zero. Absolute error below
/// ~1e-13 everywhere (series / quadrature / Hankel split).
inline double bessel_j0(double x) {
  x = std::fabs(x);
  if (x <= 8.0) return detail::j0_series(x);
  if (x < 16.0) return detail::j0_integral(x);
  return detail::j0_asymptotic(x);
}

/// Fourier transform at frequency radius `freq` of the uniform *probability*
/// measure on the sphere of radius `radius` in R^dim, as a function of the
/// product s = radius*freq:
///   d=1: cos(2 pi s),  d=2: J0(2 pi s),  d=3: sin(2 pi s)/(2 pi s).
/// Equals 1 at s=0 and is bounded by 1 in absolute value.
inline double sphere_kernel_s(int dim, double s) {
  switch (dim) {
    case 1: return std::cos(two_pi * s);
    case 2: return bessel_j0(two_pi * s);
    case 3: return sinc(two_pi * s);
    default:
      throw std::invalid_argument("sphere_kernel: only dims 1..3 are supported");
  }
}

inline double sphere_kernel(int dim, double radius, double freq) {
  return sphere_kernel_s(dim, radius * freq);
}

/// Surface measure of the unit sphere S^{d-1}: 2, 2*pi, 4*pi for d = 1,2,3.
inline double sphere_surface(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return two_pi;
    case 3: return 4.0 * pi;
    default:
      throw std::invalid_argument("sphere_surface: only dims 1..3 are supported");
  }
}

/// Envelope constant c_d with |Omega_d(s)| <= min(1, c_d * s^{-(d-1)/2}).
/// d=1 has no decay; d=3 is exact (1/(2 pi)); d=2 carries a small slack
/// over sqrt(2/pi)/ (2 pi)^{1/2} ... validated numerically in tests.
inline double kernel_envelope_constant(int dim) {
  switch (dim) {
    case 1: return 1.0;
    case 2: return 1.02 / pi;  // |J0(2 pi s)| <= 1.02/(pi sqrt(s))
    case 3: return 1.0 / two_pi;
    default:
      throw std::invalid_argument("kernel_envelope_constant: dims 1..3 only");
  }
}

}  // namespace fex
