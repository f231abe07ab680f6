#pragma once

// No-fading (equivalently ISBA) analytics on the path loss point process with
// intensity measure r^delta: ordered-point pdfs, ratios of consecutive signal
// fractions, the g_n laws, a bound on E[SF_1], random association and the
// flatness of the SF_1 cdf at zero.

#include <cmath>
#include <numbers>
#include <sstream>

#include "sigfrac/error.hpp"
#include "sigfrac/params.hpp"
#include "sigfrac/quadrature.hpp"
#include "sigfrac/roots.hpp"
#include "sigfrac/specfun.hpp"

namespace sigfrac::plp {

/// pdf of the k-th smallest path loss: delta x^(k delta - 1) e^(-x^delta) / Gamma(k).
inline double ordered_pathloss_pdf(const NetworkParams& params, int k, double x) {
  if (k < 1) throw DomainError("ordered_pathloss_pdf: k must be >= 1");
  if (!(x > 0.0)) throw DomainError("ordered_pathloss_pdf: x must be positive");
  const double d = params.delta();
  if (std::isinf(x)) return 0.0;
  return std::exp(std::log(d) + (k * d - 1.0) * std::log(x) - ln_gamma(k) - std::pow(x, d));
}

/// P(R_i <= r) = r^(i delta) for R_i = SF_(i+1) / SF_i.
inline double ratio_cdf(const NetworkParams& params, int i, double r) {
  if (i < 1) throw DomainError("ratio_cdf: i must be >= 1");
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("ratio_cdf: r must lie in [0,1]");
  return std::pow(r, i * params.delta());
}

inline double ratio_mean(const NetworkParams& params, int i) {
  if (i < 1) throw DomainError("ratio_mean: i must be >= 1");
  const double id = i * params.delta();
  return id / (1.0 + id);
}

/// E[SF_i / SF_1] = Gamma(i) Gamma(1 + 1/delta) / Gamma(i + 1/delta).
inline double mean_sf_ratio(const NetworkParams& params, int i) {
  if (i < 1) throw DomainError("mean_sf_ratio: i must be >= 1");
  const double s = 1.0 / params.delta();
  return std::exp(ln_gamma(i) + ln_gamma(1.0 + s) - ln_gamma(i + s));
}

/// E log SF_1 - E log SF_(i+1) = H_i / delta.
inline double log_sf_gap(const NetworkParams& params, int i) {
  return harmonic(i) / params.delta();
}

/// var(1/SF_1) = var(ISR) = delta / ((2-delta) (1-delta)^2) without fading.
/// Chebyshev's inequality with this variance gives approx::markov_lower_bound.
inline double inverse_sf_variance(const NetworkParams& params) {
  const double d = params.delta();
  return d / ((2.0 - d) * (1.0 - d) * (1.0 - d));
}

struct GnValue {
  double value = 0.0;
  bool upper_bound_only = false;  // t < 1/2: the probability is only bounded by value
};

/// g_n(t) = (1/t - 1)^(n delta) / (Gamma(1 + n delta) Gamma(1-delta)^n), the ccdf
/// of SF_n / (1 - SF_1 - ... - SF_(n-1)) for t >= 1/2.
inline GnValue g_n(const NetworkParams& params, int n, double t) {
  if (n < 1) throw DomainError("g_n: n must be >= 1");
  if (!(t > 0.0 && t < 1.0)) throw DomainError("g_n: t must lie in (0,1)");
  const double d = params.delta();
  const double log_v =
      n * d * std::log((1.0 - t) / t) - ln_gamma(1.0 + n * d) - n * ln_gamma(1.0 - d);
  return {std::exp(log_v), t < 0.5};
}

/// t0 + integral of g_1 over [t0, 1], where g_1(t0) = 1. Upper bound on E[SF_1].
inline double mean_sf1_upper_bound(const NetworkParams& params, const Tolerance& tol = kQuadTolerance) {
  const double d = params.delta();
  const double sinc = sinc_pi(d);
  const double t0 = 1.0 / (1.0 + std::pow(sinc, -1.0 / d));
  const double t0_root = find_root([&](double t) { return g_n(params, 1, t).value - 1.0; },
                                   1e-12, 1.0 - 1e-12, {1e-15, 1, 500});
  if (std::abs(t0 - t0_root) > 1e-9) {
    std::ostringstream os;
    os << "mean_sf1_upper_bound: crossing point disagreement " << t0 << " vs " << t0_root;
    throw NumericError(os.str(), std::abs(t0 - t0_root));
  }
  // g_1(t) = sinc(delta) ((1-t)/t)^delta
  const double tail = quad([&](double t, double tc) { return sinc * std::pow(tc / t, d); }, t0, 1.0,
                           tol, {1.0, 1.0 + d});
  return t0 + tail;
}

/// Random association: SF ~ Beta(1-delta, delta), density sin(pi delta) / (pi t^delta (1-t)^(1-delta)).
inline double rba_pdf(const NetworkParams& params, double t) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("rba_pdf: t must lie in (0,1)");
  const double d = params.delta();
  return std::sin(std::numbers::pi * d) / (std::numbers::pi * std::pow(t, d) * std::pow(1.0 - t, 1.0 - d));
}

inline double rba_cdf(const NetworkParams& params, double t, const Tolerance& tol = kQuadTolerance) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("rba_cdf: t must lie in [0,1]");
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 1.0;
  const double d = params.delta();
  if (d == 0.5) return 2.0 * std::asin(std::sqrt(t)) / std::numbers::pi;
  const double c = std::sin(std::numbers::pi * d) / std::numbers::pi;
  auto f = [&](double x, double xc) { return c / (std::pow(x, d) * std::pow(xc, 1.0 - d)); };
  if (t <= 0.5) {
    auto g = [&](double x) { return f(x, 1.0 - x); };
    return quad(g, 0.0, t, tol, {1.0 - d, 1.0});
  }
  return 1.0 - quad(f, t, 1.0, tol, {1.0, d});
}

/// Decay rate s of F_SF1(t) ~ exp(-s (1/t - 1)) as t -> 0: the positive zero
/// of 1F1(-delta; 1-delta; s). The exponent constant of the cdf is -s.
inline double flatness_rate(const NetworkParams& params, const Tolerance& tol = {}) {
  const double d = params.delta();
  auto f = [&](double s) { return hyp1f1(-d, 1.0 - d, s); };
  double lo = 0.0, hi = 1e-3;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 100.0) {
      throw NumericError("flatness_rate: no sign change of 1F1(-delta;1-delta;s) on (0, 100]");
    }
  }
  return find_root(f, lo, hi, tol);
}

}  // namespace sigfrac::plp
