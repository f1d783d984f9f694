#include <doctest.h>

#include <cmath>

#include "fex/constants.hpp"
#include "fex/lp.hpp"
#include "fex/verify.hpp"

using namespace fex;

TEST_CASE("build_instance bookkeeping") {
  LpInstance inst = build_instance(Triple(2, 1, 1), 1.0, 201, 64, 12.0);
  CHECK(inst.radii.size() == 201);
  CHECK(inst.radii.front() == 0.0);
  CHECK(inst.radii.back() == doctest::Approx(1.0));
  CHECK(inst.freqs.size() == 64);
  for (double f : inst.freqs) CHECK(f > 0.0);
  CHECK_THROWS_AS(build_instance(Triple(2, 1, 1), 1.0, 1, 4, 12.0), std::invalid_argument);
}

TEST_CASE("support hints reproduce the dilation arithmetic") {
  CHECK(*support_hint(Triple(2, 1, 1)) == doctest::Approx(1.0 / two_pi).epsilon(1e-9));
  CHECK(*support_hint(Triple(1, 2, 1)) == doctest::Approx(1.0 / pi).epsilon(1e-9));
  CHECK(*support_hint(Triple(2, 1, 3)) == doctest::Approx(1.0 / two_pi).epsilon(1e-9));
  CHECK_FALSE(support_hint(Triple(1, 3, 1)).has_value());
}

TEST_CASE("the sphere triple solves to the closed constant in one round") {
  Triple t(2, 0.5, 3);
  LpInstance inst = default_instance(t);
  LpSolution sol = solve(inst);
  REQUIRE(sol.status == SimplexStatus::Optimal);
  double cf = closed_form_constant(t).value;
  CHECK(std::fabs(sol.constant_estimate - cf) / cf < 0.02);

  // exact unit mass and retained-constraint feasibility
  double total = 0.0;
  for (double m : sol.masses) total += m;
  CHECK(total == 1.0);
  RadialMeasure mu = solution_measure(sol, t, 1e-15);
  for (double f : sol.freqs) {
    CHECK(std::fabs(fourier_at(mu, f)) <=
          std::pow(f, -t.beta) * (1.0 + 1e-9) + 1e-9);
  }

  // converged cut loop: the independent rescan stays below tolerance
  CHECK(sol.cut_rounds < inst.options.max_cut_rounds);
  CHECK(sol.max_violation <= inst.options.violation_tol);

  StructureReport st = structure_diagnostics(sol, t, inst.freq_window);
  CHECK(st.single_ring);
  CHECK(st.largest_cluster_mass >= 0.99);
  CHECK(st.decay_exponent == doctest::Approx(1.0).epsilon(0.15));
  CHECK(st.support_radius == doctest::Approx(*support_hint(t)).epsilon(0.05));
}

TEST_CASE("the box triple at reduced resolution: objective, duals, certificate") {
  Triple t(2, 1, 1);
  double hint = *support_hint(t);
  LpInstance inst = build_instance(t, 4.0 * hint, 201, 64, 12.0 / hint);
  inst.options.max_cut_rounds = 12;
  LpSolution sol = solve(inst);
  REQUIRE(sol.status == SimplexStatus::Optimal);
  double cf = closed_form_constant(t).value;
  CHECK(std::fabs(sol.constant_estimate - cf) / cf < 0.02);
  // discrete lambda* matches the dilated certificate constant D/C * s^alpha
  // = hint^alpha (psi1's H carries C = 2^alpha, the LP normalizes C = 1)
  CHECK(sol.eq_dual == doctest::Approx(hint * hint).epsilon(0.05));

  Certificate cert = extract_certificate(sol, inst);
  CHECK(cert.family == CertFamily::FromLP);
  CHECK(cert.dim == 1);
  REQUIRE(cert.terms.size() >= 4);

  // active frequencies cluster near pi (k+1/2); coefficient signs alternate
  int sign_flips = 0;
  double prev = 0.0;
  for (const auto& term : cert.terms) {
    if (std::fabs(term.coeff) < 1e-6) continue;
    double k = term.lambda / pi - 0.5;
    CHECK(std::fabs(k - std::round(k)) < 0.1);
    if (prev != 0.0 && term.coeff * prev < 0.0) ++sign_flips;
    prev = term.coeff;
  }
  CHECK(sign_flips >= 3);

  DualityReport rep = duality_report(sol, inst, cert);
  CHECK(rep.pass);
  CHECK(rep.gap_rel < 1e-6);
  CHECK(rep.slackness_freq < 1e-6 * sol.objective);
  CHECK(rep.slackness_support < 1e-6 * sol.objective);

  // perturbing one mass breaks support slackness
  LpSolution bad = sol;
  for (std::size_t i = 0; i < bad.masses.size(); ++i) {
    if (bad.masses[i] == 0.0) {
      bad.masses[i] = 1e-3;
      break;
    }
  }
  DualityReport rep_bad = duality_report(bad, inst, cert);
  CHECK(rep_bad.slackness_support > 10.0 * rep.slackness_support);

  // round trip: conditions (ii)-(iii) with discretization-scaled tolerances;
  // condition (i) is asserted on the grid only
  VerifyTolerances tol;
  tol.support = 1e-5;
  tol.lambda = 1e-3;
  tol.sup_window = inst.freq_window;
  CertificateReport cr = verify_certificate(cert, solution_measure(sol, t, 1e-12), t, tol);
  CHECK(cr.h_grid_only);
  CHECK(cr.pass_support);
  CHECK(cr.pass_sign);
  CHECK(cr.pass_lambda);
  CHECK(cr.h_nonneg.certified);

  // the discrete H is nonnegative on the radius grid; between grid points it
  // may dip by O(h^2) curvature, so midpoints get the discretization-scaled
  // allowance
  double h = inst.radii[1] - inst.radii[0];
  for (std::size_t i = 0; i < inst.radii.size(); ++i) {
    CHECK(cert.eval_H(inst.radii[i]) >= -1e-8);
    if (i + 1 < inst.radii.size())
      CHECK(cert.eval_H(0.5 * (inst.radii[i] + inst.radii[i + 1])) >= -10.0 * h * h);
  }
}

TEST_CASE("triangle triple at reduced resolution: nonnegative dual weights") {
  // f2^ is nonnegative, so every extracted certificate coefficient is >= 0
  Triple t(1, 2, 1);
  double hint = *support_hint(t);
  LpInstance inst = build_instance(t, 4.0 * hint, 201, 64, 12.0 / hint);
  inst.options.max_cut_rounds = 8;
  LpSolution sol = solve(inst);
  REQUIRE(sol.status == SimplexStatus::Optimal);
  double cf = closed_form_constant(t).value;
  CHECK(std::fabs(sol.constant_estimate - cf) / cf < 0.02);
  Certificate cert = extract_certificate(sol, inst);
  // interior dual weights inherit the transform's positivity; rows at the
  // window edge may pick up small negative truncation artifacts
  double max_coeff = 0.0, neg_sum = 0.0;
  for (const auto& term : cert.terms) max_coeff = std::max(max_coeff, std::fabs(term.coeff));
  for (const auto& term : cert.terms) {
    if (term.lambda <= 0.9 * inst.freq_window) CHECK(term.coeff >= -1e-9);
    if (term.coeff < 0.0) neg_sum -= term.coeff;
  }
  CHECK(neg_sum <= 0.02 * max_coeff);
}

TEST_CASE("positive-Fourier rows strictly raise the (2,2,1) optimum") {
  Triple t(2, 2, 1);
  double hint = 1.0 / pi;
  LpInstance base = build_instance(t, 4.0 * hint, 201, 64, 12.0 / hint);
  base.options.max_cut_rounds = 6;
  LpInstance constrained = base;
  constrained.positive_fourier = true;
  LpSolution free_sol = solve(base);
  LpSolution pf_sol = solve(constrained);
  REQUIRE(free_sol.status == SimplexStatus::Optimal);
  REQUIRE(pf_sol.status == SimplexStatus::Optimal);
  CHECK(free_sol.objective < pf_sol.objective * (1.0 - 1e-3));
  double target = 1.0 / (36.0 * std::pow(pi, 4));
  CHECK(std::fabs(pf_sol.constant_estimate - target) / target < 0.02);

  // the positivity rows join the dual certificate and the slackness checks
  Certificate cert = extract_certificate(pf_sol, constrained);
  bool has_negative = false;
  for (const auto& term : cert.terms) has_negative |= term.coeff < -1e-10;
  CHECK(has_negative);  // dropped-frequency weights come in negative
  DualityReport rep = duality_report(pf_sol, constrained, cert);
  CHECK(rep.pass);
}

TEST_CASE("refining the radius grid never raises the optimum") {
  Triple t(2, 1, 1);
  double hint = *support_hint(t);
  // fixed constraint set: no cut rounds, nested grids (101 -> 201 nodes)
  LpInstance coarse = build_instance(t, 4.0 * hint, 101, 48, 12.0 / hint);
  coarse.options.max_cut_rounds = 0;
  LpInstance fine = build_instance(t, 4.0 * hint, 201, 48, 12.0 / hint);
  fine.options.max_cut_rounds = 0;
  LpSolution a = solve(coarse), b = solve(fine);
  REQUIRE(a.status == SimplexStatus::Optimal);
  REQUIRE(b.status == SimplexStatus::Optimal);
  CHECK(b.objective <= a.objective + 1e-9);
}

TEST_CASE("degenerate duals are reported as an error") {
  Triple t(2, 1, 1);
  LpSolution sol;
  sol.status = SimplexStatus::IterationLimit;
  LpInstance inst = build_instance(t, 1.0, 11, 4, 12.0);
  CHECK_THROWS_AS(extract_certificate(sol, inst), std::invalid_argument);
}
