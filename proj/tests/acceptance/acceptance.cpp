// Acceptance suite: one test case per criterion, one [PASS]/[FAIL] line each.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fex/constants.hpp"
#include "fex/lp.hpp"
#include "fex/positivity.hpp"
#include "fex/signed_demo.hpp"
#include "fex/verify.hpp"

using namespace fex;

namespace {

struct Criterion {
  std::string label;
  bool ok = true;
  std::vector<std::string> failures;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  explicit Criterion(std::string l) : label(std::move(l)) {}

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  bool finish() {
    std::printf("[%s] %s  (%.1f s)\n", ok ? "PASS" : "FAIL", label.c_str(), elapsed());
    for (const auto& f : failures) std::printf("        failed: %s\n", f.c_str());
    std::fflush(stdout);
    return ok;
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

struct SolvedTriple {
  LpInstance inst;
  LpSolution sol;
};

const SolvedTriple& solved(double alpha, double beta, int dim, bool positive_fourier = false) {
  static std::map<std::string, SolvedTriple> cache;
  std::string key = fmt("%g_%g", alpha, beta) + "_" + std::to_string(dim) +
                    (positive_fourier ? "_pf" : "");
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Triple t(alpha, beta, dim);
  LpInstance inst;
  if (positive_fourier) {
    double hint = 1.0 / pi;  // triangle support scale for the constrained class
    inst = build_instance(t, 4.0 * hint, 401, 64, 12.0 / hint);
    inst.positive_fourier = true;
  } else {
    inst = default_instance(t, 401);
  }
  SolvedTriple st{inst, solve(inst)};
  return cache.emplace(key, std::move(st)).first->second;
}

}  // namespace

TEST_CASE("criterion 1: constant table") {
  Criterion c("criterion 1: functional at each named extremizer matches its closed form to 1e-8");
  for (double alpha : {2.0, 3.0, 4.0, 5.0, 6.0}) {
    Triple t(alpha, 1, 1);
    double f = functional(RadialMeasure::exemplar(Exemplar::Box), t);
    double cf = 1.0 / (std::pow(two_pi, alpha) * (alpha + 1.0));
    c.expect(std::fabs(f - cf) / cf < 1e-8, fmt("(%g,1,1): rel %.3g", alpha, std::fabs(f - cf) / cf));
  }
  {
    double f = functional(RadialMeasure::exemplar(Exemplar::Triangle), Triple(1, 2, 1));
    double cf = 1.0 / (9.0 * pi * pi);
    c.expect(std::fabs(f - cf) / cf < 1e-8, fmt("(1,2,1): rel %.3g", std::fabs(f - cf) / cf));
  }
  {
    double f = functional(RadialMeasure::exemplar(Exemplar::InverseRadius3D), Triple(1, 2, 3));
    double cf = 4.0 / (9.0 * pi * pi);
    c.expect(std::fabs(f - cf) / cf < 1e-8, fmt("(1,2,3): rel %.3g", std::fabs(f - cf) / cf));
  }
  for (double alpha : {2.0, 3.0}) {
    double f = functional(RadialMeasure::exemplar(Exemplar::UnitSphere3D), Triple(alpha, 1, 3));
    double cf = std::pow(1.0 / two_pi, alpha);
    c.expect(std::fabs(f - cf) / cf < 1e-8, fmt("(%g,1,3): rel %.3g", alpha, std::fabs(f - cf) / cf));
  }
  {
    double f = functional(RadialMeasure::exemplar(Exemplar::UnitSphere3D), Triple(2, 0.5, 3));
    double cf = sphere_formula_constant(2.0, 0.5);
    c.expect(std::fabs(f - cf) / cf < 1e-8, fmt("(2,0.5,3): rel %.3g", std::fabs(f - cf) / cf));
  }
  c.expect(c.elapsed() < 10.0, fmt("runtime %.1f s exceeds 10 s", c.elapsed()));
  CHECK(c.finish());
}

TEST_CASE("criterion 2: lambda_beta solver") {
  Criterion c("criterion 2: lambda_1 = 1/4 exactly, residual < 1e-12 and the square bounds on a 100-point grid");
  c.expect(lambda_beta(1.0) == 0.25, "lambda(1) != 0.25 exactly");
  for (int j = 1; j <= 100; ++j) {
    double beta = j / 100.0;
    double l = lambda_beta(beta);
    double resid = (beta < 1.0)
                       ? std::fabs(two_pi * l - (1.0 - beta) * std::tan(two_pi * l))
                       : std::fabs(lambda_residual(beta, l));
    if (resid >= 1e-12) c.expect(false, fmt("beta=%g residual %.3g", beta, resid));
    double z2 = two_pi * l * two_pi * l;
    if (!(z2 < 3.0 * beta && z2 > 3.0 * beta - 0.75 * beta * beta))
      c.expect(false, fmt("beta=%g square bounds violated (z2=%.6f)", beta, z2));
  }
  c.expect(c.elapsed() < 1.0, fmt("runtime %.2f s exceeds 1 s", c.elapsed()));
  CHECK(c.finish());
}

TEST_CASE("criterion 3: certificate suite") {
  Criterion c("criterion 3: verify_certificate passes with positive margins for all bundled pairs");
  struct Pair {
    std::string name;
    Certificate cert;
    Exemplar ex;
    Triple trip;
  };
  std::vector<Pair> pairs;
  for (double a : {2.0, 3.0, 4.0})
    pairs.push_back({fmt("psi1(a=%g)+box", a), build_psi1(a), Exemplar::Box, Triple(a, 1, 1)});
  pairs.push_back({"psi2+triangle", build_psi2(), Exemplar::Triangle, Triple(1, 2, 1)});
  pairs.push_back({"psi3+inverse-radius", build_psi3(), Exemplar::InverseRadius3D, Triple(1, 2, 3)});
  pairs.push_back({"sphere(2,1)+unit-sphere", build_sphere_certificate(2, 1),
                   Exemplar::UnitSphere3D, Triple(2, 1, 3)});
  pairs.push_back({"sphere(2,0.5)+unit-sphere", build_sphere_certificate(2, 0.5),
                   Exemplar::UnitSphere3D, Triple(2, 0.5, 3)});
  pairs.push_back({"psi5+triangle(positive-fourier)", build_psi5(), Exemplar::Triangle,
                   Triple(2, 2, 1)});
  for (const auto& p : pairs) {
    auto rep = verify_certificate(p.cert, RadialMeasure::exemplar(p.ex), p.trip, {});
    double tv = total_variation(RadialMeasure::exemplar(p.ex));
    bool margins_positive = rep.h_nonneg.min_margin > 0.0 &&
                            rep.support_allowance - rep.support_residual > 0.0 &&
                            1e-6 - rep.lambda_membership_residual > 0.0 &&
                            rep.sign_condition_margin >= -1e-9 * tv;
    c.expect(rep.pass, p.name + ": verification failed on " + rep.failed_condition);
    c.expect(margins_positive, p.name + ": some condition margin is not positive");
    std::printf("        %-32s H-margin %.2e, support slack %.2e, Lambda resid %.2e, sign margin %+.2e\n",
                p.name.c_str(), rep.h_nonneg.min_margin,
                rep.support_allowance - rep.support_residual,
                rep.lambda_membership_residual, rep.sign_condition_margin);
  }
  c.expect(c.elapsed() < 60.0, fmt("runtime %.1f s exceeds 60 s", c.elapsed()));
  CHECK(c.finish());
}

TEST_CASE("criterion 4: LP reproduction of the constant table") {
  Criterion c("criterion 4: constant_estimate within 2% and LP residuals below 1e-6 x objective");
  struct Row {
    double alpha, beta;
    int dim;
  };
  for (Row row : {Row{2, 1, 1}, Row{3, 1, 1}, Row{1, 2, 1}, Row{2, 0.5, 3}, Row{2, 1, 3}}) {
    auto t0 = std::chrono::steady_clock::now();
    const SolvedTriple& st = solved(row.alpha, row.beta, row.dim);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string name = fmt("(%g,%g,", row.alpha, row.beta) + std::to_string(row.dim) + ")";
    if (st.sol.status != SimplexStatus::Optimal) {
      c.expect(false, name + ": solver status " + simplex_status_name(st.sol.status));
      continue;
    }
    double cf = closed_form_constant(Triple(row.alpha, row.beta, row.dim)).value;
    double rel = std::fabs(st.sol.constant_estimate - cf) / cf;
    c.expect(rel <= 0.02, name + fmt(": constant off by %.3f%%", 100 * rel));
    Certificate cert = extract_certificate(st.sol, st.inst);
    DualityReport d = duality_report(st.sol, st.inst, cert);
    c.expect(d.gap_rel <= 1e-6, name + fmt(": duality gap %.2e", d.gap_rel));
    c.expect(d.slackness_freq <= 1e-6 * st.sol.objective,
             name + fmt(": frequency slackness %.2e", d.slackness_freq));
    c.expect(d.slackness_support <= 1e-6 * st.sol.objective,
             name + fmt(": support slackness %.2e", d.slackness_support));
    c.expect(secs < 120.0, name + fmt(": runtime %.1f s exceeds 120 s", secs));
    std::printf("        %-12s estimate %.6e vs %.6e (%+.4f%%), gap %.1e, rounds %d, %.1f s\n",
                name.c_str(), st.sol.constant_estimate, cf, 100 * rel, d.gap_rel,
                st.sol.cut_rounds, secs);
  }
  CHECK(c.finish());
}

TEST_CASE("criterion 5: extremizer structure") {
  Criterion c("criterion 5: single-ring mass and Fourier decay exponents");
  {
    const SolvedTriple& st = solved(2, 0.5, 3);
    StructureReport rep = structure_diagnostics(st.sol, Triple(2, 0.5, 3), st.inst.freq_window);
    c.expect(rep.largest_cluster_mass >= 0.99,
             fmt("(2,0.5,3): largest cluster holds %.4f < 0.99", rep.largest_cluster_mass));
    c.expect(rep.decay_exponent >= 0.85 && rep.decay_exponent <= 1.15,
             fmt("(2,0.5,3): decay exponent %.3f outside [0.85, 1.15]", rep.decay_exponent));
    std::printf("        (2,0.5,3): cluster mass %.6f, decay exponent %.3f\n",
                rep.largest_cluster_mass, rep.decay_exponent);
  }
  {
    const SolvedTriple& st = solved(1, 2, 1);
    StructureReport rep = structure_diagnostics(st.sol, Triple(1, 2, 1), st.inst.freq_window);
    c.expect(rep.decay_exponent >= 1.8 && rep.decay_exponent <= 2.2,
             fmt("(1,2,1): decay exponent %.3f outside [1.8, 2.2]", rep.decay_exponent));
    std::printf("        (1,2,1): decay exponent %.3f (fit residual %.2f)\n",
                rep.decay_exponent, rep.decay_fit_residual);
  }
  CHECK(c.finish());
}

TEST_CASE("criterion 6: non-uniqueness family") {
  Criterion c("criterion 6: f2 + eps sin(2 pi x) stays extremal at eps=0.05 and fails at eps=0.5");
  Triple trip(1, 2, 1);
  auto tri = RadialMeasure::exemplar(Exemplar::Triangle);
  Certificate cert = build_psi2();
  {
    auto rep = verify_other_extremizer(cert, make_f2_tilde(0.05), tri, trip);
    double cstar = 1.0 / (9.0 * pi * pi);
    double rel = std::fabs(rep.functional_value - cstar) / cstar;
    c.expect(rep.pass, "eps=0.05: conditions (a)-(b) failed: " + rep.failure);
    c.expect(rel < 1e-6, fmt("eps=0.05: functional off by %.3g rel", rel));
    std::printf("        eps=0.05: functional %.9e (rel %.1e), (b)-residual %.1e\n",
                rep.functional_value, rel, rep.b_residual);
  }
  {
    auto rep = verify_other_extremizer(cert, make_f2_tilde(0.5), tri, trip);
    c.expect(!rep.nonneg && rep.failure == "negativity",
             "eps=0.5: negativity was not detected");
    std::printf("        eps=0.5: min value %.4f at x=%.3f\n", rep.min_value, rep.min_location);
  }
  CHECK(c.finish());
}

TEST_CASE("criterion 7: positive-Fourier variant") {
  Criterion c("criterion 7: constrained LP matches the triangle value of (2,2,1) and recovers its profile");
  const SolvedTriple& st = solved(2, 2, 1, true);
  double computed = 1.0 / (36.0 * std::pow(pi, 4));
  double circulated = 1.0 / std::pow(6.0 * pi, 2);
  std::printf("        note: a (6 pi)^-2 form of this constant circulates (%.6e); direct\n"
              "        evaluation of the functional gives 1/(36 pi^4) = %.6e, which is pinned\n",
              circulated, computed);
  if (st.sol.status != SimplexStatus::Optimal) {
    c.expect(false, "solver failed");
  } else {
    double rel = std::fabs(st.sol.constant_estimate - computed) / computed;
    c.expect(rel <= 0.02, fmt("constant estimate off by %.3f%%", 100 * rel));
    StructureReport rep = structure_diagnostics(st.sol, Triple(2, 2, 1), st.inst.freq_window);
    double corr = profile_correlation(
        st.sol, [&](double r) { return 1.0 - r / rep.support_radius; }, rep.support_radius);
    c.expect(corr >= 0.99, fmt("triangle correlation %.4f < 0.99", corr));
    std::printf("        estimate %.6e (%+.4f%%), triangle correlation %.5f\n",
                st.sol.constant_estimate, 100 * rel, corr);
  }
  CHECK(c.finish());
}

TEST_CASE("criterion 8: appendix inequality checks") {
  Criterion c("criterion 8: tangent bounds and both G-function families certify");
  TanBoundsReport tb = check_tan_bounds(400);
  c.expect(tb.pass && tb.min_margin_upper > 0 && tb.min_margin_lower > 0,
           "tangent bounds did not certify");
  for (double a : {sphere_alpha_threshold(), 1.9, 2.0}) {
    GReport g = check_G_beta1(a, 400);
    c.expect(g.pass && g.min_margin > 0, fmt("G beta=1 at alpha=%.5f failed", a));
  }
  for (double a : {2.0, 3.0, 5.0}) {
    for (double b : {0.25, 0.5, 0.75, 1.0}) {
      GReport g = check_G_general(a, b, 200);
      c.expect(g.pass && g.min_margin > 0, fmt("G general at (%g, %g) failed", a, b));
    }
  }
  c.expect(c.elapsed() < 30.0, fmt("runtime %.1f s exceeds 30 s", c.elapsed()));
  CHECK(c.finish());
}

TEST_CASE("criterion 9: random-sign ratio demo") {
  Criterion c("criterion 9: median ratio decreases over modes {8,64,512} and halves from 8 to 512");
  const std::uint64_t seed = 20260101;
  double r8 = signed_ratio_demo(0.4, 8, 20, seed).median_ratio;
  double r64 = signed_ratio_demo(0.4, 64, 20, seed).median_ratio;
  double r512 = signed_ratio_demo(0.4, 512, 20, seed).median_ratio;
  std::printf("        medians: %.6f (8) -> %.6f (64) -> %.6f (512); 512/8 ratio %.4f\n",
              r8, r64, r512, r512 / r8);
  c.expect(r64 < r8 && r512 < r64, "median ratio is not strictly decreasing");
  c.expect(r512 <= 0.5 * r8, fmt("ratio(512)=%.4f exceeds ratio(8)/2=%.4f "
                                 "(the coefficient scaling gives ratio ~ modes^(-1/12); "
                                 "halving from 8 needs ~2^12 x more modes, not 64 x)",
                                 r512, 0.5 * r8));
  CHECK(c.finish());
}

TEST_CASE("criterion 10: sharp averaging inequality") {
  Criterion c("criterion 10: equality for the box, inequality for 20 random even densities");
  std::vector<std::function<double(double)>> fs;
  fs.push_back([](double) { return 1.0; });
  std::mt19937_64 rng(501);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    double a = U(rng), b = U(rng), q = U(rng);
    fs.push_back([=](double x) {
      double v = a + b * x * x + q * x * x * x * x;
      return v * v;
    });
  }
  AveragingCheckReport rep = sharp_averaging_check(fs);
  c.expect(std::fabs(rep.cases[0].gap) < 1e-8,
           fmt("box equality gap %.3g is not below 1e-8", std::fabs(rep.cases[0].gap)));
  for (std::size_t i = 1; i < rep.cases.size(); ++i)
    if (!rep.cases[i].holds)
      c.expect(false, fmt("random density %g violates the inequality", double(i)));
  CHECK(c.finish());
}
