#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fex/measure.hpp"
#include "fex/special.hpp"
#include "fex/triple.hpp"

namespace fex {

struct SupNormError : std::runtime_error {
  enum class Kind { WindowTooSmall, NoDecayBound };
  Kind kind;
  SupNormError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

/// Result of scanning ||mu^(t) t^beta||_inf over (0, window].
struct SupNormResult {
  double value = 0.0;
  double argmax_radius = 0.0;
  std::vector<double> attained_set;  // the numerical Lambda
  double truncation_bound = 0.0;     // certified bound for t > window
  bool certified = false;
  bool unbounded = false;  // norm provably infinite (closed-form growth)
  std::string flag;        // "", "uncertified_tail", "unbounded"
};

struct ScanMax {
  double t;
  double value;
};

/// Golden-section maximization on a bracket assumed unimodal.
template <typename F>
ScanMax golden_max(F&& f, double a, double b, double t_tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > t_tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  double m = 0.5 * (a + b), fm = f(m);
  if (f1 > fm) { m = x1; fm = f1; }
  if (f2 > fm) { m = x2; fm = f2; }
  return {m, fm};
}

/// Grid scan of g over [step, t_max] followed by golden refinement of every
/// local maximum (endpoints included as candidates). Deterministic.
template <typename F>
std::vector<ScanMax> scan_local_maxima(F&& g, double t_max, double step,
                                       double refine_width) {
  std::vector<double> ts, gs;
  for (double t = step; t <= t_max * (1.0 + 1e-12); t += step) {
    double tc = std::min(t, t_max);
    ts.push_back(tc);
    gs.push_back(g(tc));
    if (tc == t_max) break;
  }
  if (ts.empty()) return {};
  std::vector<ScanMax> out;
  auto push_refined = [&](double a, double b) {
    ScanMax m = golden_max(g, std::max(a, 1e-300), b, refine_width);
    if (!out.empty() && std::fabs(out.back().t - m.t) < 0.25 * step) {
      if (m.value > out.back().value) out.back() = m;
      return;
    }
    out.push_back(m);
  };
  std::size_t n = ts.size();
  for (std::size_t i = 0; i < n; ++i) {
    double prev = (i == 0) ? gs[0] : gs[i - 1];
    double next = (i + 1 == n) ? gs[n - 1] : gs[i + 1];
    bool is_max = gs[i] >= prev && gs[i] >= next;
    if (i == 0) is_max = gs[0] >= next;
    if (i + 1 == n) is_max = gs[i] >= prev;
    if (is_max) {
      double a = (i == 0) ? ts[0] * 0.5 : ts[i - 1];
      double b = (i + 1 == n) ? ts[n - 1] : ts[i + 1];
      push_refined(a, b);
    }
  }
  return out;
}

/// A tail envelope |mu^(t)| <= coeff * t^{-power} valid for t above the
/// scanned window.
struct TailEnvelope {
  double coeff;
  double power;
};

/// Alternative envelopes for one additive component of the transform; any
/// single alternative bounds that component.
struct ComponentEnvelopes {
  std::vector<TailEnvelope> alternatives;
};

namespace detail {

inline ComponentEnvelopes density_envelopes(const RadialMeasure& mu) {
  ComponentEnvelopes env;
  const auto& nd = mu.density();
  if (nd.empty()) return env;
  int d = mu.dim();
  double vmax = 0.0;
  for (const auto& n : nd) vmax = std::max(vmax, n.value);
  if (d == 1) {
    // variation bound |mu^| <= V(rho)/(pi t), jumps at the grid ends included
    double V = nd.front().value + nd.back().value;
    for (std::size_t i = 0; i + 1 < nd.size(); ++i)
      V += std::fabs(nd[i + 1].value - nd[i].value);
    env.alternatives.push_back({V / pi, 1.0});
    if (nd.front().value <= 1e-12 * vmax && nd.back().value <= 1e-12 * vmax) {
      // continuous profile: second-order bound from the slope variation
      double s_prev = 0.0, Vs = 0.0;
      for (std::size_t i = 0; i + 1 < nd.size(); ++i) {
        double s = (nd[i + 1].value - nd[i].value) / (nd[i + 1].radius - nd[i].radius);
        Vs += std::fabs(s - s_prev);
        s_prev = s;
      }
      Vs += std::fabs(s_prev);
      env.alternatives.push_back({2.0 * Vs / (4.0 * pi * pi), 2.0});
    }
  } else if (d == 3) {
    // mu^(t) = (2/t) int g(r) sin(2 pi r t) dr with g = rho * r:
    // |mu^| <= V(g)/(pi t^2)
    double V = nd.front().value * nd.front().radius + nd.back().value * nd.back().radius;
    for (std::size_t i = 0; i + 1 < nd.size(); ++i)
      V += std::fabs(nd[i + 1].value * nd[i + 1].radius - nd[i].value * nd[i].radius);
    env.alternatives.push_back({V / pi, 2.0});
  } else {
    // kernel envelope |Omega_2(s)| <= c_2 s^{-1/2}
    double c = kernel_envelope_constant(2), w = sphere_surface(2);
    double K = 0.0;
    for (std::size_t i = 0; i + 1 < nd.size(); ++i) {
      double r0 = nd[i].radius, r1 = nd[i + 1].radius;
      double vavg = 0.5 * (nd[i].value + nd[i + 1].value);
      K += w * c * vavg * std::pow(0.5 * (r0 + r1), 0.5) * (r1 - r0);
    }
    env.alternatives.push_back({K, 0.5});
  }
  return env;
}

}  // namespace detail

/// Tail envelopes for |mu^|, one entry per additive component (atoms /
/// density / exemplar closed form); empty alternatives mean no bound exists
/// for that component (d=1 atoms, or an atom at the origin).
inline std::vector<ComponentEnvelopes> tail_envelopes(const RadialMeasure& mu) {
  std::vector<ComponentEnvelopes> out;
  if (mu.exemplar_tag()) {
    ComponentEnvelopes env;
    switch (*mu.exemplar_tag()) {
      case Exemplar::Box: env.alternatives.push_back({1.0 / pi, 1.0}); break;
      case Exemplar::Triangle: env.alternatives.push_back({1.0 / (pi * pi), 2.0}); break;
      case Exemplar::InverseRadius3D: env.alternatives.push_back({2.0 / pi, 2.0}); break;
      case Exemplar::UnitSphere3D: env.alternatives.push_back({2.0, 1.0}); break;
    }
    out.push_back(env);
    return out;
  }
  int d = mu.dim();
  if (!mu.atoms().empty()) {
    ComponentEnvelopes env;
    if (d >= 2) {
      double K = 0.0;
      double c = kernel_envelope_constant(d), p = 0.5 * (d - 1);
      bool ok = true;
      for (const auto& a : mu.atoms()) {
        if (a.radius <= 0.0) { ok = false; break; }  // origin atom: no decay
        K += a.mass * c * std::pow(a.radius, -p);
      }
      if (ok) env.alternatives.push_back({K, p});
    }
    out.push_back(env);
  }
  if (!mu.density().empty()) out.push_back(detail::density_envelopes(mu));
  return out;
}

/// True when the closed form of an exemplar shows the weighted norm grows
/// without bound (its envelope exponent is attained along a sequence).
inline bool exemplar_unbounded(const RadialMeasure& mu, double beta) {
  if (!mu.exemplar_tag()) return false;
  double p = tail_envelopes(mu).front().alternatives.front().power;
  return beta > p + 1e-15;
}

struct SupNormOptions {
  double window = 24.0;
  double rel_tol = 1e-10;
  bool accept_uncertified = false;
};

/// Scans |mu^(t)| t^beta on an adaptive grid over (0, window], refines local
/// maxima, and certifies the tail beyond the window with an envelope bound.
inline SupNormResult weighted_sup_norm(const RadialMeasure& mu, double beta,
                                       const SupNormOptions& opt = {}) {
  if (!(beta > 0.0)) throw std::invalid_argument("weighted_sup_norm: beta > 0");
  if (!(opt.window > 0.0)) throw std::invalid_argument("weighted_sup_norm: window > 0");
  SupNormResult res;
  double R = mu.support_radius();
  if (R <= 0.0) {
    res.unbounded = true;
    res.flag = "unbounded";
    res.value = std::numeric_limits<double>::infinity();
    return res;
  }
  if (exemplar_unbounded(mu, beta)) {
    res.unbounded = true;
    res.flag = "unbounded";
    res.value = std::numeric_limits<double>::infinity();
    return res;
  }
  auto g = [&](double t) { return std::fabs(fourier_at(mu, t)) * std::pow(t, beta); };
  double step = std::min(0.01, 1.0 / (8.0 * R));
  double refine_width = std::max(1e-13, opt.rel_tol * 1e3 * step);
  auto maxima = scan_local_maxima(g, opt.window, step, refine_width);
  for (const auto& m : maxima) res.value = std::max(res.value, m.value);
  double att = std::max(10.0 * opt.rel_tol, 1e-9);
  for (const auto& m : maxima)
    if (m.value >= res.value * (1.0 - att)) res.attained_set.push_back(m.t);
  res.argmax_radius = res.attained_set.empty() ? 0.0 : res.attained_set.front();

  // tail bound: per component, the best alternative envelope that does not
  // grow past the window
  auto envs = tail_envelopes(mu);
  bool have_bound = !envs.empty();
  double bound = 0.0;
  for (const auto& comp : envs) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : comp.alternatives) {
      if (e.power < beta - 1e-15) continue;
      best = std::min(best, e.coeff * std::pow(opt.window, beta - e.power));
    }
    if (!std::isfinite(best)) { have_bound = false; break; }
    bound += best;
  }
  if (!have_bound) {
    if (!opt.accept_uncertified)
      throw SupNormError(SupNormError::Kind::NoDecayBound,
                         "weighted_sup_norm: no decay bound for the tail "
                         "(d=1 atoms or origin mass); pass "
                         "accept_uncertified to take the windowed scan");
    res.certified = false;
    res.flag = "uncertified_tail";
    res.truncation_bound = std::numeric_limits<double>::infinity();
    return res;
  }
  res.truncation_bound = bound;
  if (bound > res.value * (1.0 + 1e-9)) {
    if (!opt.accept_uncertified)
      throw SupNormError(SupNormError::Kind::WindowTooSmall,
                         "weighted_sup_norm: truncation bound " + std::to_string(bound) +
                             " exceeds scanned maximum " + std::to_string(res.value) +
                             "; enlarge the window");
    res.certified = false;
    res.flag = "uncertified_tail";
    return res;
  }
  res.certified = true;
  return res;
}

/// The uncertainty functional
///   C(mu) = sup^alpha * I_mu(|x|^alpha)^beta / ||mu||_TV^(alpha+beta),
/// +infinity when the weighted sup-norm is unbounded.
inline double functional(const RadialMeasure& mu, const Triple& trip,
                         SupNormOptions opt = {.window = 0.0}) {
  if (mu.dim() != trip.dim)
    throw std::invalid_argument("functional: measure/triple dimension mismatch");
  double R = mu.support_radius();
  if (opt.window <= 0.0) opt.window = (R > 0.0) ? std::max(24.0, 40.0 / R) : 24.0;
  if (opt.rel_tol <= 0.0) opt.rel_tol = 1e-10;
  SupNormResult sn = weighted_sup_norm(mu, trip.beta, opt);
  if (sn.unbounded) return std::numeric_limits<double>::infinity();
  double tv = total_variation(mu);
  if (!(tv > 0.0)) throw std::invalid_argument("functional: zero measure");
  return std::pow(sn.value, trip.alpha) * std::pow(moment(mu, trip.alpha), trip.beta) /
         std::pow(tv, trip.alpha + trip.beta);
}

}  // namespace fex
