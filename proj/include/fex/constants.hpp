#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "fex/measure.hpp"
#include "fex/sup_norm.hpp"
#include "fex/triple.hpp"

namespace fex {

/// Residual of the critical-frequency equation in the pole-free form
///   (1-beta) sin(2 pi l) - 2 pi l cos(2 pi l),
/// continuous on [0, 1/4] (the raw form has a tan pole at 1/4).
inline double lambda_residual(double beta, double lambda) {
  double z = two_pi * lambda;
  return (1.0 - beta) * std::sin(z) - z * std::cos(z);
}

/// Unique root lambda_beta in (0, 1/4) of 2 pi l = (1-beta) tan(2 pi l);
/// exactly 1/4 for beta = 1. Residual below 1e-12 in the tan form away
/// from the pole.
inline double lambda_beta(double beta) {
  if (!(beta > 0.0) || !(beta <= 1.0))
    throw std::domain_error("lambda_beta: beta must lie in (0, 1]");
  if (beta == 1.0) return 0.25;
  double lo = 1e-9, hi = 0.25 - 1e-9;
  double flo = lambda_residual(beta, lo);
  double fhi = lambda_residual(beta, hi);
  if (!(flo < 0.0) || !(fhi > 0.0)) {
    // root squeezed against 1/4 for beta within ~1e-8 of 1
    if (fhi <= 0.0) return 0.25;
    throw std::runtime_error("lambda_beta: bracket failure");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    double mid = 0.5 * (lo + hi);
    if (lambda_residual(beta, mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

enum class ConstantSource { ClosedForm, SphereFormula, Unknown };

inline const char* constant_source_name(ConstantSource s) {
  switch (s) {
    case ConstantSource::ClosedForm: return "ClosedForm";
    case ConstantSource::SphereFormula: return "SphereFormula";
    case ConstantSource::Unknown: return "Unknown";
  }
  return "?";
}

struct ConstantResult {
  double value = 0.0;
  ConstantSource source = ConstantSource::Unknown;
  std::optional<Exemplar> extremizer_hint;
  std::optional<double> lambda;  // lambda_beta when the sphere formula applies
};

/// Smallest alpha for which the sphere is known extremal at beta = 1.
inline double sphere_alpha_threshold() { return 1.0 / (pi / 2.0 - 1.0); }

/// (sin(2 pi l_b)/(2 pi l_b^{1-beta}))^alpha with l_b = lambda_beta(beta).
inline double sphere_formula_constant(double alpha, double beta) {
  double l = lambda_beta(beta);
  return std::pow(std::sin(two_pi * l) / (two_pi * std::pow(l, 1.0 - beta)), alpha);
}

/// Closed-form optimal constant for the covered parameter triples; source
/// Unknown otherwise.
inline ConstantResult closed_form_constant(const Triple& t) {
  ConstantResult r;
  if (t.dim == 1 && t.beta == 1.0 && t.alpha >= 2.0) {
    r.value = 1.0 / (std::pow(two_pi, t.alpha) * (t.alpha + 1.0));
    r.source = ConstantSource::ClosedForm;
    r.extremizer_hint = Exemplar::Box;
    return r;
  }
  if (t.dim == 1 && t.alpha == 1.0 && t.beta == 2.0) {
    r.value = 1.0 / (9.0 * pi * pi);
    r.source = ConstantSource::ClosedForm;
    r.extremizer_hint = Exemplar::Triangle;
    return r;
  }
  if (t.dim == 3 && t.alpha == 1.0 && t.beta == 2.0) {
    r.value = 4.0 / (9.0 * pi * pi);
    r.source = ConstantSource::ClosedForm;
    r.extremizer_hint = Exemplar::InverseRadius3D;
    return r;
  }
  if (t.dim == 3 &&
      ((t.beta == 1.0 && t.alpha >= sphere_alpha_threshold()) ||
       (t.alpha >= 2.0 && t.beta > 0.0 && t.beta < 1.0))) {
    r.lambda = lambda_beta(t.beta);
    r.value = sphere_formula_constant(t.alpha, t.beta);
    r.source = ConstantSource::SphereFormula;
    r.extremizer_hint = Exemplar::UnitSphere3D;
    return r;
  }
  return r;
}

struct CrossCheckReport {
  ConstantResult constant;
  double functional_value = 0.0;
  double abs_discrepancy = 0.0;
  double rel_discrepancy = 0.0;
};

/// Evaluates the functional at the named extremizer and compares with the
/// closed form.
inline CrossCheckReport cross_check(const Triple& t) {
  CrossCheckReport rep;
  rep.constant = closed_form_constant(t);
  if (rep.constant.source == ConstantSource::Unknown)
    throw std::invalid_argument("cross_check: triple is not a covered case");
  RadialMeasure mu = RadialMeasure::exemplar(*rep.constant.extremizer_hint);
  rep.functional_value = functional(mu, t);
  rep.abs_discrepancy = std::fabs(rep.functional_value - rep.constant.value);
  rep.rel_discrepancy = rep.abs_discrepancy / rep.constant.value;
  return rep;
}

}  // namespace fex
