#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "fex/quadrature.hpp"
#include "fex/special.hpp"
#include "fex/sup_norm.hpp"

namespace fex {

/// Smooth bump on the Fourier side: exp(1 - 1/(1-(2 xi)^2)) for |xi| < 1/2,
/// zero outside. Its transform is a Schwartz-class window on the x side.
inline double bump_hat(double xi) {
  double u = 2.0 * xi;
  double w = 1.0 - u * u;
  if (w <= 1e-14) return 0.0;
  return std::exp(1.0 - 1.0 / w);
}

/// Cached window Phi(x) = 2 int_0^{1/2} bump_hat(xi) cos(2 pi xi x) d xi,
/// evaluated by quadrature on a uniform grid with 4-point interpolation.
class BumpWindow {
 public:
  explicit BumpWindow(double x_max = 40.0, double grid_step = 0.01)
      : x_max_(x_max), h_(grid_step) {
    int n = static_cast<int>(std::ceil(x_max_ / h_)) + 3;
    values_.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = i * h_;
      values_[i] = 2.0 * integrate_oscillatory(
                             [&](double xi) { return bump_hat(xi) * std::cos(two_pi * xi * x); },
                             0.0, 0.5, (x > 1.0) ? 1.0 / x : 1.0);
    }
  }

  double x_max() const { return x_max_; }

  double operator()(double x) const {
    x = std::fabs(x);
    if (x >= x_max_) return 0.0;
    double s = x / h_;
    int i = static_cast<int>(s);
    double t = s - i;
    if (i == 0) {  // even extension: mirror node -1 onto node 1
      double m1 = values_[1], p0 = values_[0], p1 = values_[1], p2 = values_[2];
      return cubic(m1, p0, p1, p2, t);
    }
    if (i + 2 >= static_cast<int>(values_.size())) return values_.back();
    return cubic(values_[i - 1], values_[i], values_[i + 1], values_[i + 2], t);
  }

 private:
  static double cubic(double m1, double p0, double p1, double p2, double t) {
    // Catmull-Rom
    double a = 2.0 * p0;
    double b = p1 - m1;
    double c = 2.0 * m1 - 5.0 * p0 + 4.0 * p1 - p2;
    double d = -m1 + 3.0 * p0 - 3.0 * p1 + p2;
    return 0.5 * (a + b * t + c * t * t + d * t * t * t);
  }

  double x_max_, h_;
  std::vector<double> values_;
};

struct SignedDemoTrial {
  int trial = 0;
  double ratio = 0.0;
};

struct SignedDemoStats {
  int num_modes = 0;
  double median_ratio = 0.0;
  double sup_weighted = 0.0;  // ||f^ |xi|^beta||_inf (sign-independent)
  std::vector<SignedDemoTrial> trials;
};

namespace detail {

inline const BumpWindow& shared_bump() {
  static BumpWindow w;
  return w;
}

}  // namespace detail

/// Random-sign exhibit for the failure of the signed inequality at small
/// beta: f(x) = Phi(x) sum_j eps_j c_j e^{-2 pi i j x}, c_j = (1+j)^{-beta},
/// alpha fixed at 2. Returns the per-trial ratio
///   ||f^ |xi|^beta||^{a/(a+b)} ||f |x|^a||_1^{b/(a+b)} / ||f||_1
/// and its median. Trials derive their seeds as seed + trial index.
inline SignedDemoStats signed_ratio_demo(double beta, int num_modes, int num_trials,
                                         std::uint64_t seed) {
  if (num_modes < 1) throw std::invalid_argument("signed_ratio_demo: num_modes >= 1");
  if (num_trials < 1) throw std::invalid_argument("signed_ratio_demo: num_trials >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("signed_ratio_demo: beta > 0");
  const double alpha = 2.0;
  const BumpWindow& phi = detail::shared_bump();

  std::vector<double> c(num_modes + 1, 0.0);
  for (int j = 1; j <= num_modes; ++j) c[j] = std::pow(1.0 + j, -beta);

  // ||f^ |xi|^beta||_inf: the translates of bump_hat are disjoint, so the
  // supremum splits mode by mode and does not depend on the signs.
  double sup = 0.0;
  for (int j = 1; j <= num_modes; ++j) {
    auto gj = [&](double u) { return c[j] * bump_hat(u) * std::pow(j - u, beta); };
    ScanMax best{0.0, 0.0};
    for (int k = 0; k <= 64; ++k) {
      double u = -0.5 + k / 64.0;
      double v = gj(u);
      if (v > best.value) best = {u, v};
    }
    ScanMax ref = golden_max(gj, std::max(-0.5, best.t - 1.0 / 64), std::min(0.5, best.t + 1.0 / 64), 1e-10);
    sup = std::max(sup, std::max(best.value, ref.value));
  }

  const double X = phi.x_max();
  const double h = 1.0 / (16.0 * (num_modes + 1));
  const int N = static_cast<int>(std::ceil(X / h)) | 1;  // odd interval count for Simpson

  SignedDemoStats stats;
  stats.num_modes = num_modes;
  stats.sup_weighted = sup;

  std::vector<std::complex<double>> acc(static_cast<std::size_t>(N) + 1);
  std::vector<double> ratios;
  for (int trial = 0; trial < num_trials; ++trial) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(trial));
    std::vector<double> eps(num_modes + 1, 1.0);
    for (int j = 1; j <= num_modes; ++j) eps[j] = (rng() & 1u) ? 1.0 : -1.0;

    std::fill(acc.begin(), acc.end(), std::complex<double>(0.0, 0.0));
    constexpr int chunk = 4096;
    for (int n0 = 0; n0 <= N; n0 += chunk) {
      int n1 = std::min(N, n0 + chunk - 1);
      for (int j = 1; j <= num_modes; ++j) {
        double cj = eps[j] * c[j];
        std::complex<double> w = std::polar(1.0, -two_pi * h * j);
        std::complex<double> z = std::polar(cj, -two_pi * h * n0 * j);
        for (int n = n0; n <= n1; ++n) {
          acc[n] += z;
          z *= w;
        }
      }
    }

    // Simpson over [0, X], doubled for evenness of |f| and |f| x^2
    double l1 = 0.0, mom = 0.0;
    for (int n = 0; n <= N; ++n) {
      double x = n * h;
      double w = (n == 0 || n == N) ? 1.0 : ((n & 1) ? 4.0 : 2.0);
      double af = std::abs(acc[n]) * std::fabs(phi(x));
      l1 += w * af;
      mom += w * af * x * x;
    }
    l1 *= 2.0 * h / 3.0;
    mom *= 2.0 * h / 3.0;

    double ratio = std::pow(sup, alpha / (alpha + beta)) *
                   std::pow(mom, beta / (alpha + beta)) / l1;
    stats.trials.push_back({trial, ratio});
    ratios.push_back(ratio);
  }
  std::sort(ratios.begin(), ratios.end());
  std::size_t m = ratios.size() / 2;
  stats.median_ratio =
      (ratios.size() % 2) ? ratios[m] : 0.5 * (ratios[m - 1] + ratios[m]);
  return stats;
}

}  // namespace fex
