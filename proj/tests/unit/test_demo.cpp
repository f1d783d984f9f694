#include <doctest.h>

#include <cmath>

#include "fex/signed_demo.hpp"
#include "oracles.hpp"

using namespace fex;

TEST_CASE("bump window: transform pair is consistent") {
  // Phi is band-limited to [-1/2, 1/2]; recover bump_hat by quadrature of Phi
  const BumpWindow& phi = detail::shared_bump();
  CHECK(bump_hat(0.0) == doctest::Approx(1.0));
  CHECK(bump_hat(0.5) == 0.0);
  CHECK(bump_hat(0.49) > 0.0);
  // Phi(0) = 2 int_0^{1/2} bump_hat (romberg oracle)
  double ref = 2.0 * oracles::romberg([](double u) { return bump_hat(u); }, 0.0, 0.5, 20, 1e-13);
  CHECK(phi(0.0) == doctest::Approx(ref).epsilon(1e-8));
  // window decay at the truncation edge (~e^{-2.2 sqrt(x)}); the x^2-weighted
  // tail beyond contributes under 0.2% to the demo moments
  CHECK(std::fabs(phi(38.0)) < 1e-5);
}

TEST_CASE("single mode: ratio is sign- and seed-independent") {
  SignedDemoStats a = signed_ratio_demo(0.4, 1, 5, 1);
  SignedDemoStats b = signed_ratio_demo(0.4, 1, 5, 999);
  CHECK(a.median_ratio == doctest::Approx(b.median_ratio).epsilon(1e-12));
  for (const auto& tr : a.trials)
    CHECK(tr.ratio == doctest::Approx(a.median_ratio).epsilon(1e-12));
}

TEST_CASE("weighted sup of the translates is sign-independent and near 1") {
  // c_j (1+j)^beta = 1, and the bump peak contributes at u ~ 0, so the
  // per-mode weighted sup is close to (j/(1+j))^beta but never above 1
  SignedDemoStats s = signed_ratio_demo(0.4, 8, 1, 3);
  CHECK(s.sup_weighted <= 1.0 + 1e-12);
  CHECK(s.sup_weighted > 0.8);
}

TEST_CASE("ratio decreases with the mode count at beta = 0.4") {
  SignedDemoStats s8 = signed_ratio_demo(0.4, 8, 6, 7);
  SignedDemoStats s64 = signed_ratio_demo(0.4, 64, 6, 7);
  CHECK(s64.median_ratio < s8.median_ratio);
}
