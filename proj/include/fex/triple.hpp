#pragma once

#include <stdexcept>
#include <string>

namespace fex {

/// Parameter tuple (alpha, beta, dim) of the uncertainty functional
///   C(mu) = ||mu^(xi) |xi|^beta||_inf^alpha * I_mu(|x|^alpha)^beta / ||mu||_TV^(alpha+beta).
struct Triple {
  double alpha = 2.0;  // moment exponent, > 0
  double beta = 1.0;   // Fourier weight exponent, > 0
  int dim = 1;         // ambient dimension, >= 1

  Triple() = default;
  Triple(double a, double b, int d) : alpha(a), beta(b), dim(d) { validate(); }

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("Triple: alpha must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("Triple: beta must be > 0");
    if (dim < 1) throw std::invalid_argument("Triple: dim must be >= 1");
  }
};

inline bool operator==(const Triple& a, const Triple& b) {
  return a.alpha == b.alpha && a.beta == b.beta && a.dim == b.dim;
}

}  // namespace fex
