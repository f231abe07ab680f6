#pragma once

// Closed-form approximations and bounds for the NBA-1 signal fraction
// distribution: rational (Pade-type) truncations, small-t polynomials, the
// t -> 1 expansion, the BEST beta-based form, the four-parameter generalized
// beta with moment matching, NBA-m small-t asymptotics and a Markov bound.
//
// None of these are clamped to [0,1]; the raw formula values are returned.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "sigfrac/error.hpp"
#include "sigfrac/params.hpp"
#include "sigfrac/quadrature.hpp"
#include "sigfrac/rayleigh.hpp"
#include "sigfrac/roots.hpp"
#include "sigfrac/specfun.hpp"

namespace sigfrac::approx {

/// Denominator coefficient a_n = Gamma(n+1) Gamma(1-delta) / Gamma(n+1-delta)
/// of the ccdf written as (sum t^n) / (sum a_n t^n).
inline double rational_coeff(const NetworkParams& params, int n) {
  if (n < 0) throw DomainError("rational_coeff: n must be >= 0");
  const double d = params.delta();
  return std::exp(ln_gamma(n + 1.0) + ln_gamma(1.0 - d) - ln_gamma(n + 1.0 - d));
}

/// Both series truncated at order s. Matches the first s derivatives at 0.
inline double rational_ccdf(const NetworkParams& params, int s, double t) {
  if (s < 1) throw DomainError("rational_ccdf: order s must be >= 1");
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("rational_ccdf: t must lie in [0,1)");
  const double d = params.delta();
  double num = 1.0, den = 1.0, power = 1.0, a = 1.0;
  for (int n = 1; n <= s; ++n) {
    power *= t;
    a *= n / (n - d);
    num += power;
    den += a * power;
  }
  return num / den;
}

/// rational_ccdf(s, t) minus the exact ccdf, computed from the series
/// remainders so that the O(t^(s+1)) difference is resolved for small t.
inline double rational_ccdf_error(const NetworkParams& params, int s, double t) {
  if (s < 1) throw DomainError("rational_ccdf_error: order s must be >= 1");
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("rational_ccdf_error: t must lie in [0,1)");
  const double d = params.delta();
  double num = 1.0, den = 1.0, power = 1.0, a = 1.0;
  for (int n = 1; n <= s; ++n) {
    power *= t;
    a *= n / (n - d);
    num += power;
    den += a * power;
  }
  // remainders of sum t^n = 1/(1-t) and sum a_n t^n = 2F1(1,1;1-delta;t)
  const double num_rest = power * t / (1.0 - t);
  double den_rest = 0.0;
  for (int n = s + 1; n < 100000; ++n) {
    power *= t;
    a *= n / (n - d);
    const double term = a * power;
    den_rest += term;
    if (term <= 1e-17 * den_rest) break;
  }
  const double full_den = den + den_rest;
  return (num * den_rest - num_rest * den) / (den * full_den);
}

/// 1 - MISR t (order 1) or 1 - MISR t + (MISR^2 - delta)/(2 - delta) t^2 (order 2).
inline double poly_ccdf(const NetworkParams& params, int order, double t) {
  if (order != 1 && order != 2) throw DomainError("poly_ccdf: order must be 1 or 2");
  const double mu = params.misr();
  const double d = params.delta();
  double v = 1.0 - mu * t;
  if (order == 2) v += (mu * mu - d) / (2.0 - d) * t * t;
  return v;
}

/// Sign of MISR^2 - delta: +1 when the ccdf is locally convex at 0 (order-1
/// polynomial below, order-2 above), -1 when both lie above, 0 at
/// delta = (3 - sqrt 5)/2.
inline int convexity_sign(const NetworkParams& params) {
  const double mu = params.misr();
  const double v = mu * mu - params.delta();
  if (std::abs(v) < 1e-12) return 0;
  return v > 0.0 ? 1 : -1;
}

/// Expansion at t = 1: sinc(delta) (1-t)^delta, times (1 + delta (1-t)) at order 2.
inline double tail_ccdf(const NetworkParams& params, int order, double t) {
  if (order != 1 && order != 2) throw DomainError("tail_ccdf: order must be 1 or 2");
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("tail_ccdf: t must lie in (0,1]");
  const double d = params.delta();
  const double w = 1.0 - t;
  double v = sinc_pi(d) * std::pow(w, d);
  if (order == 2) v *= 1.0 + d * w;
  return v;
}

/// BEST approximation ((1-t)/(1+MISR t))^delta of the SF ccdf.
inline double best_sf_ccdf(const NetworkParams& params, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("best_sf_ccdf: t must lie in [0,1]");
  return std::pow((1.0 - t) / (1.0 + params.misr() * t), params.delta());
}

/// BEST approximation (1 + (1+MISR) theta)^(-delta) of the SIR ccdf.
inline double best_sir_ccdf(const NetworkParams& params, double theta) {
  if (!(theta >= 0.0)) throw DomainError("best_sir_ccdf: theta must be >= 0");
  return std::pow(1.0 + (1.0 + params.misr()) * theta, -params.delta());
}

/// SF threshold t achieving reliability r under BEST.
inline double best_inverse(const NetworkParams& params, double reliability) {
  if (!(reliability > 0.0 && reliability <= 1.0)) {
    throw DomainError("best_inverse: reliability must lie in (0,1]");
  }
  const double s = std::pow(reliability, 1.0 / params.delta());
  return (1.0 - s) / (1.0 + params.misr() * s);
}

/// Four-parameter generalized beta on [0,1] with finite positive density at 0.
struct GBParams {
  double a = 1.0;
  double b = 1.0;
  double p = 1.0;
  double q = 1.0;

  /// a = 1/p and b fixed by the density at 0 equalling `misr`.
  static GBParams from_shape(double p, double q, double misr) {
    if (!(p > 0.0) || !(q > 0.0) || !(misr > 0.0)) {
      throw DomainError("GBParams: p, q and misr must be positive");
    }
    return {1.0 / p, 1.0 / (misr * p * beta_fn(p, q)), p, q};
  }

  /// The simple tight fit: a = p = 1, q = delta, b = 1 - delta.
  static GBParams best(const NetworkParams& params) {
    return from_shape(1.0, params.delta(), params.misr());
  }
};

/// Generalized beta with p = m, q = delta and the same density constraint at
/// zero. Experimental: a suggested starting point for NBA-m, not validated.
inline GBParams gb_params_for_nakagami(const NetworkParams& params, double m) {
  if (!(m > 0.0)) throw DomainError("gb_params_for_nakagami: m must be positive");
  return GBParams::from_shape(m, params.delta(), params.misr());
}

/// Density given t and 1-t.
inline double gb_pdf_from_complement(const GBParams& g, double t, double one_minus_t) {
  const double ta = std::pow(t, g.a);
  const double one_minus_ta = -std::expm1(g.a * std::log1p(-one_minus_t));
  return g.a * std::pow(one_minus_ta, g.q - 1.0) /
         (g.b * beta_fn(g.p, g.q) * std::pow(1.0 + (std::pow(g.b, -g.a) - 1.0) * ta, g.p + g.q));
}

inline double gb_pdf(const GBParams& g, double t) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("gb_pdf: t must lie in (0,1)");
  return gb_pdf_from_complement(g, t, 1.0 - t);
}

/// k-th moment in closed form:
/// b^k B((k+1)p, q)/B(p,q) 2F1((k+1)p, kp; (k+1)p+q; 1 - b^a).
inline double gb_moment(const GBParams& g, int k) {
  if (k < 1) throw DomainError("gb_moment: k must be >= 1");
  const double kp1p = (k + 1) * g.p;
  const double z = 1.0 - std::pow(g.b, g.a);
  return std::pow(g.b, k) * std::exp(ln_gamma(kp1p) + ln_gamma(g.p + g.q) - ln_gamma(kp1p + g.q) -
                                     ln_gamma(g.p)) *
         hyp2f1(kp1p, k * g.p, kp1p + g.q, z);
}

struct FitResult {
  GBParams params;
  std::array<double, 2> target_moments{};
  std::array<double, 2> achieved_moments{};
  double residual = 0.0;  // max relative moment error
  int iterations = 0;
  bool used_fallback = false;
};

class FitError : public NumericError {
 public:
  FitError(const std::string& what, FitResult best)
      : NumericError(what, best.residual), best_(best) {}
  const FitResult& best_iterate() const noexcept { return best_; }

 private:
  FitResult best_;
};

namespace detail {

struct MomentSystem {
  double misr;
  std::array<double, 2> target;

  std::array<double, 2> residual(double p, double q) const {
    const GBParams g = GBParams::from_shape(p, q, misr);
    return {gb_moment(g, 1) / target[0] - 1.0, gb_moment(g, 2) / target[1] - 1.0};
  }
};

inline double max_abs(const std::array<double, 2>& r) {
  return std::max(std::abs(r[0]), std::abs(r[1]));
}

// Damped Newton in (log p, log q) with a forward-difference Jacobian.
inline std::optional<std::pair<double, double>> newton(const MomentSystem& sys, double p0,
                                                       double q0, double goal, int max_iter,
                                                       int& iterations) {
  double x = std::log(p0), y = std::log(q0);
  auto r = sys.residual(p0, q0);
  for (iterations = 0; iterations < max_iter; ++iterations) {
    if (max_abs(r) <= goal) return std::make_pair(std::exp(x), std::exp(y));
    const double h = 1e-7;
    const auto rx = sys.residual(std::exp(x + h), std::exp(y));
    const auto ry = sys.residual(std::exp(x), std::exp(y + h));
    const double j11 = (rx[0] - r[0]) / h, j12 = (ry[0] - r[0]) / h;
    const double j21 = (rx[1] - r[1]) / h, j22 = (ry[1] - r[1]) / h;
    const double det = j11 * j22 - j12 * j21;
    if (!std::isfinite(det) || det == 0.0) return std::nullopt;
    const double dx = -(j22 * r[0] - j12 * r[1]) / det;
    const double dy = -(-j21 * r[0] + j11 * r[1]) / det;
    double lambda = 1.0;
    bool improved = false;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      const double nx = x + lambda * dx, ny = y + lambda * dy;
      try {
        const auto nr = sys.residual(std::exp(nx), std::exp(ny));
        if (std::isfinite(nr[0]) && std::isfinite(nr[1]) && max_abs(nr) < max_abs(r)) {
          x = nx;
          y = ny;
          r = nr;
          improved = true;
          break;
        }
      } catch (const NumericError&) {
      } catch (const DomainError&) {
      }
    }
    if (!improved) return std::nullopt;
  }
  if (max_abs(r) <= goal) return std::make_pair(std::exp(x), std::exp(y));
  return std::nullopt;
}

// Nested bracketing: for each p, q solves the first-moment equation; the
// outer search on p solves the second.
inline std::pair<double, double> nested_bisection(const MomentSystem& sys, const Tolerance& tol) {
  auto q_for = [&](double p) {
    auto f = [&](double q) { return sys.residual(p, q)[0]; };
    double lo = 1e-3, hi = 1.0;
    while (f(lo) * f(hi) > 0.0 && hi < 1e3) hi *= 2.0;
    return find_root(f, lo, hi, tol);
  };
  auto g = [&](double p) { return sys.residual(p, q_for(p))[1]; };
  double lo = 0.05, hi = 1.0;
  while (g(lo) * g(hi) > 0.0 && hi < 50.0) hi *= 1.5;
  const double p = find_root(g, lo, hi, tol);
  return {p, q_for(p)};
}

}  // namespace detail

/// Generalized beta fit matching E[SF] and E[SF^2] of the exact NBA-1
/// distribution. The targets come from quadrature of the exact ccdf.
inline FitResult gb_fit(const NetworkParams& params, const Tolerance& tol = {1e-10, 2'000'000, 100}) {
  tol.validate();
  const detail::MomentSystem sys{
      params.misr(),
      {rayleigh::sf_moment_exact(params, 1), rayleigh::sf_moment_exact(params, 2)}};
  constexpr double kFitGoal = 1e-6;
  const double goal = std::min(kFitGoal, tol.rel_eps * 10.0);

  FitResult out;
  out.target_moments = sys.target;
  int iterations = 0;
  auto solution = detail::newton(sys, 1.0, params.delta(), goal, tol.max_iter, iterations);
  out.iterations = iterations;
  if (!solution) {
    out.used_fallback = true;
    try {
      solution = detail::nested_bisection(sys, {1e-13, tol.max_terms, 200});
    } catch (const NumericError& e) {
      out.params = GBParams::best(params);
      out.achieved_moments = {gb_moment(out.params, 1), gb_moment(out.params, 2)};
      out.residual = detail::max_abs(sys.residual(out.params.p, out.params.q));
      throw FitError(std::string("gb_fit: moment matching failed: ") + e.what(), out);
    }
  }
  out.params = GBParams::from_shape(solution->first, solution->second, params.misr());
  out.achieved_moments = {gb_moment(out.params, 1), gb_moment(out.params, 2)};
  out.residual = detail::max_abs(sys.residual(out.params.p, out.params.q));
  if (out.residual > kFitGoal) {
    std::ostringstream os;
    os << "gb_fit: residual " << out.residual << " above " << kFitGoal;
    throw FitError(os.str(), out);
  }
  return out;
}

/// c_m = m^(m-1)/Gamma(m), the constant in F_h(x) ~ c_m x^m for Nakagami-m power fading.
inline double nakagami_cdf_constant(double m) {
  if (!(m > 0.0)) throw DomainError("nakagami_cdf_constant: m must be positive");
  return std::exp((m - 1.0) * std::log(m) - ln_gamma(m));
}

/// Coefficient c_m E[ISR^m] of the small-t expansion 1 - c_m E[ISR^m] t^m,
/// available for m = 1 (Rayleigh) and m = 2.
inline double nba_m_coefficient(const NetworkParams& params, int m) {
  const double mu = params.misr();
  const double d = params.delta();
  switch (m) {
    case 1:
      return mu;
    case 2: {
      constexpr double second_moment_h = 1.5;  // E[h^2] = 1 + 1/m for Nakagami-2
      return nakagami_cdf_constant(2.0) * (2.0 * mu * mu + d * second_moment_h / (2.0 - d));
    }
    default:
      throw DomainError("nba_m: only m = 1 and m = 2 are supported");
  }
}

/// Small-t asymptote of the NBA-m SF ccdf.
inline double nba_m_cdf_asymptote(const NetworkParams& params, int m, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("nba_m_cdf_asymptote: t must lie in [0,1]");
  return 1.0 - nba_m_coefficient(params, m) * std::pow(t, m);
}

/// Markov-type lower bound 1 - delta/(2-delta) t^2/(1-delta-t)^2, t < 1-delta.
inline double markov_lower_bound(const NetworkParams& params, double t) {
  const double d = params.delta();
  if (!(t >= 0.0 && t < 1.0 - d)) throw DomainError("markov_lower_bound: requires 0 <= t < 1 - delta");
  const double r = t / (1.0 - d - t);
  return 1.0 - d / (2.0 - d) * r * r;
}

}  // namespace sigfrac::approx
