#pragma once

// Exact signal-fraction and SIR distributions for Rayleigh fading with
// nearest-base-station association (NBA-1) in a Poisson network.

#include <algorithm>
#include <cmath>
#include <limits>

#include "sigfrac/error.hpp"
#include "sigfrac/params.hpp"
#include "sigfrac/quadrature.hpp"
#include "sigfrac/specfun.hpp"
#include "sigfrac/transforms.hpp"

namespace sigfrac::rayleigh {

inline double misr(const NetworkParams& params) { return params.misr(); }

/// ccdf of the SF given t and 1-t separately (full relative accuracy near 1).
inline double sf_ccdf_from_complement(const NetworkParams& params, double t, double one_minus_t) {
  if (one_minus_t == 0.0) return 0.0;
  return 1.0 / scaled_hyp2f1_11(params.delta(), t, one_minus_t);
}

/// P(SF > t) = 1 / ((1-t) 2F1(1,1;1-delta;t)); equals 0 at t = 1.
inline double sf_ccdf_exact(const NetworkParams& params, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("sf_ccdf_exact: t must lie in [0,1]");
  return sf_ccdf_from_complement(params, t, 1.0 - t);
}

/// P(SIR > theta) = 1/2F1(1,-delta;1-delta;-theta), evaluated through the SF
/// form at T(theta).
inline double sir_ccdf_exact(const NetworkParams& params, double theta) {
  if (!(theta >= 0.0)) throw DomainError("sir_ccdf_exact: theta must be >= 0");
  if (std::isinf(theta)) return 0.0;
  return sf_ccdf_from_complement(params, theta / (1.0 + theta), 1.0 / (1.0 + theta));
}

/// Density of the SF by central differences of the ccdf, given t and 1-t.
inline double sf_pdf_from_complement(const NetworkParams& params, double t, double one_minus_t) {
  // step relative to the distance from the nearer endpoint
  const double h = 1e-4 * std::min(t, one_minus_t);
  return (sf_ccdf_from_complement(params, t - h, one_minus_t + h) -
          sf_ccdf_from_complement(params, t + h, one_minus_t - h)) /
         (2.0 * h);
}

/// Density of the SF (minus the derivative of the ccdf); tends to MISR at 0
/// and diverges at 1.
inline double sf_pdf_exact(const NetworkParams& params, double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("sf_pdf_exact: t must lie in (0,1); the limits are MISR at 0 and +inf at 1");
  }
  return sf_pdf_from_complement(params, t, 1.0 - t);
}

/// E[SF^k] = k * int_0^1 t^(k-1) P(SF > t) dt.
inline double sf_moment_exact(const NetworkParams& params, int k,
                              const Tolerance& tol = kQuadTolerance) {
  if (k < 1) throw DomainError("sf_moment_exact: k must be >= 1");
  auto integrand = [&](double t, double one_minus_t) {
    return std::pow(t, k - 1) * sf_ccdf_from_complement(params, t, one_minus_t);
  };
  // the ccdf vanishes like (1-t)^delta at 1
  return k * quad(integrand, 0.0, 1.0, tol, {1.0, 1.0 + params.delta()});
}

}  // namespace sigfrac::rayleigh
