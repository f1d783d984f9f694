#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fex/certificate.hpp"
#include "fex/constants.hpp"
#include "fex/measure.hpp"
#include "fex/simplex.hpp"
#include "fex/sup_norm.hpp"

namespace fex {

struct LpOptions {
  int max_cut_rounds = 20;
  double violation_tol = 1e-7;
  int max_cuts_per_round = 8;
  std::string pivot_rule = "dantzig-bland";
  long simplex_max_iterations = 200'000;
};

/// Finite discretization of the sphere-atom primal: masses on a radius grid,
/// two-sided frequency rows |mu^(t_j)| <= t_j^{-beta}, unit total mass.
struct LpInstance {
  Triple triple;
  std::vector<double> radii;  // strictly increasing, starts at 0
  std::vector<double> freqs;  // initial frequency constraints, > 0
  double freq_window = 12.0;
  LpOptions options;
  bool positive_fourier = false;
  std::vector<double> pos_freqs;  // mu^ >= 0 rows (positive-Fourier variant)

  void validate() const {
    trip_check();
    if (radii.size() < 2) throw std::invalid_argument("LpInstance: need >= 2 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
      if (!(radii[i] > radii[i - 1]))
        throw std::invalid_argument("LpInstance: radii must increase");
    for (double t : freqs)
      if (!(t > 0.0)) throw std::invalid_argument("LpInstance: freqs must be > 0");
    if (!(freq_window > 0.0)) throw std::invalid_argument("LpInstance: window > 0");
  }

 private:
  void trip_check() const { triple.validate(); }
};

struct LpSolution {
  std::vector<double> radii;   // copied from the instance
  std::vector<double> masses;  // sums to 1 exactly
  double objective = 0.0;      // sum m_i r_i^alpha ~ C*^{1/beta}
  double constant_estimate = 0.0;  // objective^beta
  std::vector<double> freqs;   // retained frequency rows
  std::vector<double> duals;   // nu_j = lower-row dual minus upper-row dual
  std::vector<double> pos_freqs, pos_duals;  // positive-Fourier rows
  double eq_dual = 0.0;        // multiplier of the mass row (discrete lambda*)
  SimplexStatus status = SimplexStatus::IterationLimit;
  int cut_rounds = 0;
  double max_violation = 0.0;  // residual sup-norm violation at termination
  long simplex_iterations = 0;
};

/// Support radius of the E1-normalized closed-form extremizer, when the
/// triple is covered.
inline std::optional<double> support_hint(const Triple& t) {
  ConstantResult c = closed_form_constant(t);
  if (c.source == ConstantSource::Unknown) return std::nullopt;
  RadialMeasure ex = RadialMeasure::exemplar(*c.extremizer_hint);
  SupNormResult sn = weighted_sup_norm(ex, t.beta, {.window = 64.0, .rel_tol = 1e-12});
  double s0 = sn.value / total_variation(ex);
  return ex.support_radius() * std::pow(s0, 1.0 / t.beta);
}

inline LpInstance build_instance(const Triple& triple, double r_max, int n_radii,
                                 int initial_freqs, double freq_window) {
  if (n_radii < 2) throw std::invalid_argument("build_instance: n_radii >= 2");
  if (initial_freqs < 1) throw std::invalid_argument("build_instance: initial_freqs >= 1");
  LpInstance inst;
  inst.triple = triple;
  inst.radii.reserve(n_radii);
  for (int i = 0; i < n_radii; ++i) inst.radii.push_back(r_max * i / (n_radii - 1));
  inst.freqs.reserve(initial_freqs);
  for (int j = 1; j <= initial_freqs; ++j)
    inst.freqs.push_back(freq_window * j / initial_freqs);
  inst.freq_window = freq_window;
  inst.validate();
  return inst;
}

/// Defaults: R_max = 4 x support hint (1.0 when unknown), 401 radii, 64 seed
/// frequencies, window 12 support-scale oscillations wide.
inline LpInstance default_instance(const Triple& triple, int n_radii = 401) {
  double hint = support_hint(triple).value_or(0.25);
  double r_max = 4.0 * hint;
  double window = 12.0 / hint;
  return build_instance(triple, r_max, n_radii, 64, window);
}

namespace detail {

struct LpCore {
  SimplexResult res;
  std::vector<double> duals, pos_duals;
  double eq_dual = 0.0;
};

inline LpCore solve_discrete(const LpInstance& inst, const std::vector<double>& freqs,
                             const std::vector<double>& pos_freqs) {
  const auto& r = inst.radii;
  const std::size_t n = r.size(), f = freqs.size(), p = pos_freqs.size();
  const std::size_t m = 1 + 2 * f + p;
  int d = inst.triple.dim;
  double beta = inst.triple.beta;

  std::vector<std::vector<double>> cols;
  cols.reserve(n + m - 1);
  std::vector<double> c, lo, up, b(m, 0.0);
  b[0] = 1.0;
  for (std::size_t j = 0; j < f; ++j) {
    double u = std::pow(freqs[j], -beta);
    b[1 + 2 * j] = u;
    b[2 + 2 * j] = u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> col(m, 0.0);
    col[0] = 1.0;
    for (std::size_t j = 0; j < f; ++j) {
      double a = sphere_kernel(d, r[i], freqs[j]);
      col[1 + 2 * j] = a;
      col[2 + 2 * j] = -a;
    }
    for (std::size_t q = 0; q < p; ++q)
      col[1 + 2 * f + q] = -sphere_kernel(d, r[i], pos_freqs[q]);
    cols.push_back(std::move(col));
    c.push_back(std::pow(r[i], inst.triple.alpha));
    lo.push_back(0.0);
    up.push_back(std::numeric_limits<double>::infinity());
  }
  std::vector<int> slack_of_row(m, -1);
  for (std::size_t k = 1; k < m; ++k) {
    std::vector<double> col(m, 0.0);
    col[k] = 1.0;
    cols.push_back(std::move(col));
    c.push_back(0.0);
    lo.push_back(0.0);
    up.push_back(std::numeric_limits<double>::infinity());
    slack_of_row[k] = static_cast<int>(n + k - 1);
  }

  SimplexOptions sopt;
  sopt.max_iterations = inst.options.simplex_max_iterations;
  DenseSimplex sx(std::move(cols), std::move(b), std::move(c), std::move(lo),
                  std::move(up), std::move(slack_of_row));
  LpCore core;
  core.res = sx.solve(sopt);
  core.eq_dual = core.res.y.empty() ? 0.0 : core.res.y[0];
  core.duals.resize(f);
  for (std::size_t j = 0; j < f; ++j)
    core.duals[j] = core.res.y[2 + 2 * j] - core.res.y[1 + 2 * j];
  core.pos_duals.resize(p);
  for (std::size_t q = 0; q < p; ++q) core.pos_duals[q] = core.res.y[1 + 2 * f + q];
  return core;
}

}  // namespace detail

/// Alternates bounded-variable simplex solves with cut generation: the
/// incumbent's weighted transform is scanned over (0, window] and up to
/// `max_cuts_per_round` most violated frequencies are appended until the
/// violation drops below tolerance or the round budget is exhausted.
inline LpSolution solve(const LpInstance& inst) {
  inst.validate();
  const auto& r = inst.radii;
  int d = inst.triple.dim;
  double beta = inst.triple.beta;
  double r_active = std::max(r.back(), 1e-6);
  double min_sep = std::max(0.5 / (2.0 * r_active), 1e-9);

  std::vector<double> freqs(inst.freqs), pos_freqs(inst.pos_freqs);
  std::sort(freqs.begin(), freqs.end());
  if (inst.positive_fourier && pos_freqs.empty()) {
    int n_pos = 256;
    for (int q = 1; q <= n_pos; ++q)
      pos_freqs.push_back(inst.freq_window * q / n_pos);
  }

  LpSolution sol;
  sol.radii = r;
  detail::LpCore core;
  for (int round = 0;; ++round) {
    core = detail::solve_discrete(inst, freqs, pos_freqs);
    sol.cut_rounds = round;
    sol.simplex_iterations += core.res.iterations;
    sol.status = core.res.status;
    if (core.res.status != SimplexStatus::Optimal) break;

    std::vector<SphereAtom> atoms;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (core.res.x[i] > 1e-14) atoms.push_back({r[i], core.res.x[i]});
    auto mu_hat = [&](double t) {
      double v = 0.0;
      for (const auto& a : atoms) v += a.mass * sphere_kernel(d, a.radius, t);
      return v;
    };
    auto weighted = [&](double t) { return std::fabs(mu_hat(t)) * std::pow(t, beta); };

    double scan_step = std::min(0.01 * inst.freq_window, 1.0 / (16.0 * r_active));
    auto maxima = scan_local_maxima(weighted, inst.freq_window, scan_step, 1e-11);
    std::vector<ScanMax> cuts;
    double worst = 0.0;
    for (const auto& m : maxima) {
      double viol = m.value - 1.0;
      worst = std::max(worst, viol);
      if (viol > inst.options.violation_tol) cuts.push_back({m.t, viol});
    }
    if (inst.positive_fourier) {
      auto neg = scan_local_maxima([&](double t) { return -mu_hat(t); },
                                   inst.freq_window, scan_step, 1e-11);
      for (const auto& m : neg) {
        double viol = m.value;  // = -mu_hat
        worst = std::max(worst, viol);
        if (viol > inst.options.violation_tol) cuts.push_back({m.t, -viol});
      }
    }
    sol.max_violation = std::max(worst, 0.0);
    if (cuts.empty() || round >= inst.options.max_cut_rounds) break;

    std::sort(cuts.begin(), cuts.end(), [](const ScanMax& a, const ScanMax& b) {
      return std::fabs(a.value) > std::fabs(b.value) ||
             (std::fabs(a.value) == std::fabs(b.value) && a.t < b.t);
    });
    int added = 0;
    std::vector<double> added_ts;
    for (const auto& cut : cuts) {
      if (added >= inst.options.max_cuts_per_round) break;
      bool is_pos_cut = inst.positive_fourier && cut.value < 0.0;
      const auto& existing = is_pos_cut ? pos_freqs : freqs;
      bool dup = false;
      for (double t : existing)
        if (std::fabs(t - cut.t) < 1e-9) { dup = true; break; }
      for (double t : added_ts)
        if (std::fabs(t - cut.t) < min_sep) { dup = true; break; }
      if (dup) continue;
      (is_pos_cut ? pos_freqs : freqs).push_back(cut.t);
      added_ts.push_back(cut.t);
      ++added;
    }
    if (added == 0) break;
    std::sort(freqs.begin(), freqs.end());
    std::sort(pos_freqs.begin(), pos_freqs.end());
  }

  sol.freqs = freqs;
  sol.pos_freqs = pos_freqs;
  if (core.res.status == SimplexStatus::Optimal) {
    sol.masses.assign(r.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      sol.masses[i] = std::max(0.0, core.res.x[i]);
      total += sol.masses[i];
    }
    // exact unit mass: renormalize, then absorb the rounding residue into
    // the largest entry
    std::size_t imax = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      sol.masses[i] /= total;
      if (sol.masses[i] > sol.masses[imax]) imax = i;
    }
    double s = 0.0;
    for (double m : sol.masses) s += m;
    sol.masses[imax] += 1.0 - s;
    sol.objective = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
      sol.objective += sol.masses[i] * std::pow(r[i], inst.triple.alpha);
    sol.constant_estimate = std::pow(sol.objective, beta);
    sol.duals = core.duals;
    sol.pos_duals = core.pos_duals;
    sol.eq_dual = core.eq_dual;
  }
  return sol;
}

/// The positive-Fourier variant: same solve with
/// mu^ >= 0 rows on a dense grid, refreshed by the cut loop.
inline LpSolution solve_positive_fourier(LpInstance inst) {
  inst.positive_fourier = true;
  return solve(inst);
}

/// Converts the LP masses into an atomic RadialMeasure.
inline RadialMeasure solution_measure(const LpSolution& sol, const Triple& trip,
                                      double mass_tol = 0.0) {
  std::vector<SphereAtom> atoms;
  for (std::size_t i = 0; i < sol.radii.size(); ++i)
    if (sol.masses[i] > mass_tol) atoms.push_back({sol.radii[i], sol.masses[i]});
  return RadialMeasure::from_atoms(trip.dim, atoms);
}

/// Builds the finite dual certificate from the nonzero row multipliers:
/// H(x) = sum_j nu_j Omega_d(t_j x) + |x|^alpha - lambda*, stored with the
/// sphere-mass normalization of the certificate kernel.
inline Certificate extract_certificate(const LpSolution& sol, const LpInstance& inst) {
  if (sol.status != SimplexStatus::Optimal)
    throw std::invalid_argument("extract_certificate: solution not optimal");
  Certificate cert;
  cert.dim = inst.triple.dim;
  cert.alpha = inst.triple.alpha;
  cert.c_poly = 1.0;
  cert.d_const = sol.eq_dual;
  cert.tail_bound = 0.0;
  cert.family = CertFamily::FromLP;
  double scale_tol = 1e-12;
  auto add_term = [&](double t, double nu) {
    if (std::fabs(nu) < scale_tol) return;
    double coeff = nu / (std::pow(t, cert.dim - 1) * sphere_surface(cert.dim));
    for (auto& existing : cert.terms) {
      if (std::fabs(existing.lambda - t) < 1e-9) {
        existing.coeff += coeff;
        return;
      }
    }
    cert.terms.push_back({t, coeff});
  };
  for (std::size_t j = 0; j < sol.freqs.size(); ++j) add_term(sol.freqs[j], sol.duals[j]);
  for (std::size_t q = 0; q < sol.pos_freqs.size(); ++q)
    add_term(sol.pos_freqs[q], sol.pos_duals[q]);
  if (cert.terms.empty())
    throw std::runtime_error("extract_certificate: all duals vanish (degenerate discretization)");
  std::sort(cert.terms.begin(), cert.terms.end(),
            [](const CertTerm& a, const CertTerm& b) { return a.lambda < b.lambda; });
  return cert;
}

struct DualityReport {
  double objective = 0.0;
  double dual_value = 0.0;       // lambda* - ||nu||_TV
  double gap_rel = 0.0;          // |objective - dual_value| / objective
  double slackness_freq = 0.0;   // Eq.-(4.2)-type residual
  double slackness_support = 0.0;  // sum_i m_i H(r_i)
  bool pass = false;
};

/// Strong duality and complementary slackness of the discretized problem.
inline DualityReport duality_report(const LpSolution& sol, const LpInstance& inst,
                                    const Certificate& cert, double tol_rel = 1e-6) {
  DualityReport rep;
  rep.objective = sol.objective;
  double nu_tv = 0.0;
  for (std::size_t j = 0; j < sol.freqs.size(); ++j)
    nu_tv += std::fabs(sol.duals[j]) * std::pow(sol.freqs[j], -inst.triple.beta);
  rep.dual_value = sol.eq_dual - nu_tv;
  rep.gap_rel = std::fabs(rep.objective - rep.dual_value) / std::max(rep.objective, 1e-300);

  RadialMeasure mu = solution_measure(sol, inst.triple, 1e-15);
  double pair = 0.0;
  for (std::size_t j = 0; j < sol.freqs.size(); ++j) {
    double w = sol.duals[j] * std::pow(sol.freqs[j], -inst.triple.beta);
    pair += w * fourier_at(mu, sol.freqs[j]) * std::pow(sol.freqs[j], inst.triple.beta);
  }
  rep.slackness_freq = std::fabs(pair - nu_tv);
  for (std::size_t q = 0; q < sol.pos_freqs.size(); ++q)
    rep.slackness_freq += std::fabs(sol.pos_duals[q] * fourier_at(mu, sol.pos_freqs[q]));

  double s2 = 0.0;
  for (std::size_t i = 0; i < sol.radii.size(); ++i)
    if (sol.masses[i] > 0.0) s2 += sol.masses[i] * cert.eval_H(sol.radii[i]);
  rep.slackness_support = std::fabs(s2);

  double scale = tol_rel * std::max(rep.objective, 1e-300);
  rep.pass = rep.gap_rel <= tol_rel && rep.slackness_freq <= scale &&
             rep.slackness_support <= scale;
  return rep;
}

/// Triangular-kernel density estimate of the radial mass profile from the
/// atomic LP masses, with even reflection at the origin. Basic solutions are
/// spiky; the smoothed profile is the weak-sense density they approximate.
inline std::vector<std::pair<double, double>> smoothed_profile(const LpSolution& sol,
                                                               double bandwidth,
                                                               int samples,
                                                               double r_max) {
  std::vector<std::pair<double, double>> out;
  out.reserve(samples);
  for (int j = 0; j < samples; ++j) {
    double r = (j + 0.5) / samples * r_max;
    double s = 0.0;
    for (std::size_t i = 0; i < sol.radii.size(); ++i) {
      if (sol.masses[i] <= 0.0) continue;
      double u1 = std::fabs(r - sol.radii[i]) / bandwidth;
      double u2 = (r + sol.radii[i]) / bandwidth;  // mirror atom
      if (u1 < 1.0) s += sol.masses[i] * (1.0 - u1) / bandwidth;
      if (u2 < 1.0) s += sol.masses[i] * (1.0 - u2) / bandwidth;
    }
    out.push_back({r, s});
  }
  return out;
}

/// Pearson correlation of the smoothed profile against a reference shape on
/// (0, r0].
inline double profile_correlation(const LpSolution& sol,
                                  const std::function<double(double)>& shape, double r0,
                                  double bandwidth_frac = 0.15, int samples = 64) {
  auto prof = smoothed_profile(sol, bandwidth_frac * r0, samples, r0);
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (const auto& [r, x] : prof) {
    double y = shape(r);
    sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
  }
  double n = static_cast<double>(prof.size());
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

struct MassCluster {
  double center = 0.0;
  double mass = 0.0;
  double lo = 0.0, hi = 0.0;
};

struct StructureReport {
  std::vector<MassCluster> clusters;  // significant clusters, mass >= 1e-4
  int cluster_count = 0;
  double largest_cluster_mass = 0.0;
  double mass_outside_clusters = 0.0;
  double support_radius = 0.0;
  double decay_exponent = 0.0;  // fitted gamma with |mu^| ~ t^{-gamma}
  double decay_fit_residual = 0.0;
  bool single_ring = false;  // >= 99% of mass in one cluster
};

/// Atom clustering, support radius, and the fitted Fourier decay exponent
/// over the last decade of the scanned window.
inline StructureReport structure_diagnostics(const LpSolution& sol, const Triple& trip,
                                             double window = 0.0, double mass_tol = 1e-9) {
  StructureReport rep;
  const auto& r = sol.radii;
  double h = r.size() > 1 ? r[1] - r[0] : 0.0;
  MassCluster cur;
  bool open = false;
  double last_r = 0.0;
  std::vector<MassCluster> all;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (sol.masses[i] <= mass_tol) continue;
    rep.support_radius = r[i];
    if (open && r[i] - last_r <= 2.0 * h + 1e-15) {
      cur.center = (cur.center * cur.mass + r[i] * sol.masses[i]) / (cur.mass + sol.masses[i]);
      cur.mass += sol.masses[i];
      cur.hi = r[i];
    } else {
      if (open) all.push_back(cur);
      cur = {r[i], sol.masses[i], r[i], r[i]};
      open = true;
    }
    last_r = r[i];
  }
  if (open) all.push_back(cur);
  double total = 0.0;
  for (const auto& cl : all) total += cl.mass;
  for (const auto& cl : all) {
    rep.largest_cluster_mass = std::max(rep.largest_cluster_mass, cl.mass);
    if (cl.mass >= 1e-4 * std::max(total, 1e-300)) rep.clusters.push_back(cl);
  }
  rep.cluster_count = static_cast<int>(rep.clusters.size());
  double inside = 0.0;
  for (const auto& cl : rep.clusters) inside += cl.mass;
  rep.mass_outside_clusters = total - inside;
  rep.single_ring = rep.largest_cluster_mass >= 0.99 * total;

  // peak-envelope decay fit over the last decade of the window
  RadialMeasure mu = solution_measure(sol, trip, mass_tol);
  if (window <= 0.0) window = 12.0 / std::max(rep.support_radius, 1e-6);
  double step = std::min(0.01 * window, 1.0 / (16.0 * std::max(rep.support_radius, 1e-6)));
  auto peaks = scan_local_maxima(
      [&](double t) { return std::fabs(fourier_at(mu, t)); }, window, step, 1e-11);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : peaks) {
    if (p.t < window / 10.0 || p.value <= 0.0) continue;
    double lx = std::log(p.t), ly = std::log(p.value);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++n;
  }
  if (n >= 2) {
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.decay_exponent = -slope;
    double a0 = (sy - slope * sx) / n, ss = 0.0;
    for (const auto& p : peaks) {
      if (p.t < window / 10.0 || p.value <= 0.0) continue;
      double e = std::log(p.value) - (a0 + slope * std::log(p.t));
      ss += e * e;
    }
    rep.decay_fit_residual = std::sqrt(ss / n);
  }
  return rep;
}

}  // namespace fex
