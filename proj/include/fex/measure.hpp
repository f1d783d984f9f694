#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fex/quadrature.hpp"
#include "fex/special.hpp"
#include "fex/triple.hpp"

namespace fex {

/// Closed-form measures used throughout:
///   Box            d=1  density 1 on [-1/2,1/2]
///   Triangle       d=1  density (1-|x|) on [-1,1]
///   InverseRadius3D d=3 density |x|^{-1} on the unit ball
///   UnitSphere3D   d=3  uniform measure on the unit sphere, total mass 4*pi
enum class Exemplar { Box, Triangle, InverseRadius3D, UnitSphere3D };

inline const char* exemplar_name(Exemplar e) {
  switch (e) {
    case Exemplar::Box: return "Box";
    case Exemplar::Triangle: return "Triangle";
    case Exemplar::InverseRadius3D: return "InverseRadius3D";
    case Exemplar::UnitSphere3D: return "UnitSphere3D";
  }
  return "?";
}

inline std::optional<Exemplar> exemplar_from_name(const std::string& s) {
  if (s == "Box") return Exemplar::Box;
  if (s == "Triangle") return Exemplar::Triangle;
  if (s == "InverseRadius3D") return Exemplar::InverseRadius3D;
  if (s == "UnitSphere3D") return Exemplar::UnitSphere3D;
  return std::nullopt;
}

inline int exemplar_dim(Exemplar e) {
  return (e == Exemplar::Box || e == Exemplar::Triangle) ? 1 : 3;
}

/// An atom (radius, mass): `mass` times the uniform probability measure on
/// the sphere of that radius; radius 0 is a point mass at the origin.
struct SphereAtom {
  double radius;
  double mass;
};

/// A sample (radius, value) of a piecewise-linear radial density profile
/// rho(r), taken against d-dimensional volume.
struct DensityNode {
  double radius;
  double value;
};

/// A non-negative radial measure on R^d: spherical atoms plus an optional
/// sampled radial density, or one of the closed-form exemplars.
class RadialMeasure {
 public:
  static RadialMeasure exemplar(Exemplar e) {
    RadialMeasure m;
    m.dim_ = exemplar_dim(e);
    m.exemplar_ = e;
    m.validate();
    return m;
  }

  static RadialMeasure from_atoms(int dim, std::vector<SphereAtom> atoms) {
    RadialMeasure m;
    m.dim_ = dim;
    m.atoms_ = std::move(atoms);
    m.validate();
    return m;
  }

  static RadialMeasure from_density(int dim, std::vector<DensityNode> nodes) {
    RadialMeasure m;
    m.dim_ = dim;
    m.density_ = std::move(nodes);
    m.validate();
    return m;
  }

  static RadialMeasure from_parts(int dim, std::vector<SphereAtom> atoms,
                                  std::vector<DensityNode> nodes) {
    RadialMeasure m;
    m.dim_ = dim;
    m.atoms_ = std::move(atoms);
    m.density_ = std::move(nodes);
    m.validate();
    return m;
  }

  int dim() const { return dim_; }
  const std::optional<Exemplar>& exemplar_tag() const { return exemplar_; }
  const std::vector<SphereAtom>& atoms() const { return atoms_; }
  const std::vector<DensityNode>& density() const { return density_; }

  void validate() const {
    if (dim_ < 1 || dim_ > 3)
      throw std::invalid_argument("RadialMeasure: dim must be 1, 2 or 3");
    bool has_data = !atoms_.empty() || !density_.empty();
    if (exemplar_.has_value() == has_data)
      throw std::invalid_argument(
          "RadialMeasure: exactly one of exemplar or atoms/density");
    if (exemplar_ && exemplar_dim(*exemplar_) != dim_)
      throw std::invalid_argument("RadialMeasure: exemplar dim mismatch");
    for (const auto& a : atoms_) {
      if (!(a.radius >= 0.0)) throw std::invalid_argument("atom radius < 0");
      if (!(a.mass > 0.0)) throw std::invalid_argument("atom mass must be > 0");
    }
    for (std::size_t i = 0; i < density_.size(); ++i) {
      if (!(density_[i].radius > 0.0))
        throw std::invalid_argument("density radius must be > 0");
      if (!(density_[i].value >= 0.0))
        throw std::invalid_argument("density value must be >= 0");
      if (i > 0 && !(density_[i].radius > density_[i - 1].radius))
        throw std::invalid_argument("density grid must be strictly increasing");
    }
    if (density_.size() == 1)
      throw std::invalid_argument("density needs at least two nodes");
  }

  /// Largest radius carrying mass.
  double support_radius() const {
    if (exemplar_) return (*exemplar_ == Exemplar::Box) ? 0.5 : 1.0;
    double r = 0.0;
    for (const auto& a : atoms_) r = std::max(r, a.radius);
    if (!density_.empty()) r = std::max(r, density_.back().radius);
    return r;
  }

  /// Piecewise-linear profile value; zero outside the grid.
  double density_at(double r) const {
    if (density_.empty()) return 0.0;
    if (r < density_.front().radius || r > density_.back().radius) return 0.0;
    auto it = std::lower_bound(
        density_.begin(), density_.end(), r,
        [](const DensityNode& n, double x) { return n.radius < x; });
    if (it == density_.begin()) return it->value;
    auto lo = std::prev(it);
    double w = (r - lo->radius) / (it->radius - lo->radius);
    return lo->value + w * (it->value - lo->value);
  }

 private:
  int dim_ = 1;
  std::optional<Exemplar> exemplar_;
  std::vector<SphereAtom> atoms_;
  std::vector<DensityNode> density_;
};

/// ||mu||_TV: exact for exemplars, sum of masses plus density quadrature
/// otherwise.
inline double total_variation(const RadialMeasure& mu) {
  if (mu.exemplar_tag()) {
    switch (*mu.exemplar_tag()) {
      case Exemplar::Box: return 1.0;
      case Exemplar::Triangle: return 1.0;
      case Exemplar::InverseRadius3D: return two_pi;
      case Exemplar::UnitSphere3D: return 4.0 * pi;
    }
  }
  double tv = 0.0;
  for (const auto& a : mu.atoms()) tv += a.mass;
  const auto& nodes = mu.density();
  if (!nodes.empty()) {
    double w = sphere_surface(mu.dim());
    int d = mu.dim();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      // integrand is a polynomial of degree <= d, GL16 is exact
      tv += w * gl16(
                    [&](double r) {
                      double t = (r - nodes[i].radius) /
                                 (nodes[i + 1].radius - nodes[i].radius);
                      double v = nodes[i].value + t * (nodes[i + 1].value - nodes[i].value);
                      return v * std::pow(r, d - 1);
                    },
                    nodes[i].radius, nodes[i + 1].radius);
    }
  }
  return tv;
}

/// I_mu(|x|^alpha).
inline double moment(const RadialMeasure& mu, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("moment: alpha must be > 0");
  if (mu.exemplar_tag()) {
    switch (*mu.exemplar_tag()) {
      case Exemplar::Box: return std::pow(2.0, -alpha) / (alpha + 1.0);
      case Exemplar::Triangle: return 2.0 / ((alpha + 1.0) * (alpha + 2.0));
      case Exemplar::InverseRadius3D: return 4.0 * pi / (alpha + 2.0);
      case Exemplar::UnitSphere3D: return 4.0 * pi;
    }
  }
  double s = 0.0;
  for (const auto& a : mu.atoms()) s += a.mass * std::pow(a.radius, alpha);
  const auto& nodes = mu.density();
  if (!nodes.empty()) {
    double w = sphere_surface(mu.dim());
    int d = mu.dim();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      double r0 = nodes[i].radius, r1 = nodes[i + 1].radius;
      s += w * integrate(
                   [&](double r) {
                     double t = (r - r0) / (r1 - r0);
                     double v = nodes[i].value + t * (nodes[i + 1].value - nodes[i].value);
                     return v * std::pow(r, alpha + d - 1);
                   },
                   r0, r1, 1e-14 * (1.0 + s));
    }
  }
  return s;
}

/// mu^ at frequency radius `freq` (real, since mu is radial and non-negative).
inline double fourier_at(const RadialMeasure& mu, double freq) {
  if (freq < 0.0) throw std::invalid_argument("fourier_at: freq must be >= 0");
  if (mu.exemplar_tag()) {
    switch (*mu.exemplar_tag()) {
      case Exemplar::Box: return sinc(pi * freq);
      case Exemplar::Triangle: {
        double s = sinc(pi * freq);
        return s * s;
      }
      case Exemplar::InverseRadius3D: {
        // (1 - cos(2 pi t))/(pi t^2) written in the cancellation-free form
        double s = sinc(pi * freq);
        return two_pi * s * s;
      }
      case Exemplar::UnitSphere3D: return 4.0 * pi * sinc(two_pi * freq);
    }
  }
  double v = 0.0;
  int d = mu.dim();
  for (const auto& a : mu.atoms()) v += a.mass * sphere_kernel(d, a.radius, freq);
  const auto& nodes = mu.density();
  if (!nodes.empty()) {
    double w = sphere_surface(d);
    double period = (freq > 0.0) ? 1.0 / freq : 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      double r0 = nodes[i].radius, r1 = nodes[i + 1].radius;
      v += w * integrate_oscillatory(
                   [&](double r) {
                     double t = (r - r0) / (r1 - r0);
                     double rho = nodes[i].value + t * (nodes[i + 1].value - nodes[i].value);
                     return rho * std::pow(r, d - 1) * sphere_kernel(d, r, freq);
                   },
                   r0, r1, period);
    }
  }
  return v;
}

/// Discretize an exemplar: atoms for the sphere, a piecewise-linear profile
/// on n nodes otherwise. Used by dilate() and the discretization cross-checks.
inline RadialMeasure to_discrete(const RadialMeasure& mu, int n_nodes = 10'000) {
  if (!mu.exemplar_tag()) return mu;
  Exemplar e = *mu.exemplar_tag();
  if (e == Exemplar::UnitSphere3D)
    return RadialMeasure::from_atoms(3, {{1.0, 4.0 * pi}});
  std::vector<DensityNode> nodes;
  nodes.reserve(n_nodes + 1);
  if (e == Exemplar::InverseRadius3D) {
    // geometric grid resolves the 1/r profile; the r^2 weight kills the
    // mass below the first node
    double r0 = 1e-8;
    for (int i = 0; i <= n_nodes; ++i) {
      double r = (i == n_nodes)
                     ? 1.0
                     : r0 * std::pow(1.0 / r0, static_cast<double>(i) / n_nodes);
      nodes.push_back({r, 1.0 / r});
    }
    return RadialMeasure::from_density(3, nodes);
  }
  double R = (e == Exemplar::Box) ? 0.5 : 1.0;
  double h = R / n_nodes;
  nodes.push_back({R * 1e-9, 1.0});
  for (int i = 1; i <= n_nodes; ++i) {
    double r = i * h;
    nodes.push_back({r, (e == Exemplar::Triangle) ? 1.0 - r : 1.0});
  }
  return RadialMeasure::from_density(exemplar_dim(e), nodes);
}

/// Pushforward of mu under x -> x/scale. Masses are preserved; exemplars are
/// converted to atomic/density form first.
inline RadialMeasure dilate(const RadialMeasure& mu, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("dilate: scale must be > 0");
  RadialMeasure base = mu.exemplar_tag() ? to_discrete(mu) : mu;
  std::vector<SphereAtom> atoms = base.atoms();
  for (auto& a : atoms) a.radius /= scale;
  std::vector<DensityNode> nodes = base.density();
  double vol = std::pow(scale, base.dim());
  for (auto& n : nodes) {
    n.radius /= scale;
    n.value *= vol;
  }
  return RadialMeasure::from_parts(base.dim(), std::move(atoms), std::move(nodes));
}

}  // namespace fex
