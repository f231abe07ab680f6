#pragma once

// Special functions used by the signal-fraction formulas: log-gamma, gamma,
// beta, the Gauss hypergeometric series (real parameters, real argument in
// [0,1)), Kummer's confluent function, sinc and harmonic numbers.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sigfrac/error.hpp"

namespace sigfrac {

struct Tolerance {
  double rel_eps = 1e-14;
  int max_terms = 2'000'000;  // series terms
  int max_iter = 500;         // root-finder iterations / quadrature subdivisions

  void validate() const {
    if (!(rel_eps > 0.0) || max_terms < 1 || max_iter < 1) {
      throw DomainError("Tolerance requires rel_eps > 0, max_terms >= 1, max_iter >= 1");
    }
  }
};

/// Natural log of Gamma(x) for x > 0 (Lanczos-type rational approximation,
/// g = 671/128, 14 terms).
inline double ln_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("ln_gamma: argument must be positive");
  static constexpr std::array<double, 14> cof = {
      57.1562356658629235,     -59.5979603554754912,     14.1360979747417471,
      -0.491913816097620199,   .339946499848118887e-4,   .465236289270485756e-4,
      -.983744753048795646e-4, .158088703224912494e-3,   -.210264441724104883e-3,
      .217439618115212643e-3,  -.164318106536763890e-3,  .844182239838527433e-4,
      -.261908384015814087e-4, .368991826595316234e-5};
  double y = x;
  double tmp = x + 5.24218750000000000;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (double c : cof) ser += c / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

/// 1/Gamma(x) for any real x; zero at the poles 0, -1, -2, ...
inline double rgamma(double x) {
  if (x > 0.0) return std::exp(-ln_gamma(x));
  if (x == std::floor(x)) return 0.0;
  // reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
  return std::sin(std::numbers::pi * x) * std::exp(ln_gamma(1.0 - x)) / std::numbers::pi;
}

/// Gamma(x) for real x away from the poles.
inline double gamma_fn(double x) {
  if (x > 0.0) return std::exp(ln_gamma(x));
  if (x == std::floor(x)) throw DomainError("gamma_fn: pole at non-positive integer");
  return 1.0 / rgamma(x);
}

inline double beta_fn(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("beta_fn: arguments must be positive");
  return std::exp(ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q));
}

/// sin(pi x)/(pi x), exact 1 at 0.
inline double sinc_pi(double x) {
  if (x == 0.0) return 1.0;
  if (x == std::round(x)) return 0.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

/// H_i = 1 + 1/2 + ... + 1/i.
inline double harmonic(int i) {
  if (i < 1) throw DomainError("harmonic: index must be >= 1");
  double h = 0.0;
  for (int k = 1; k <= i; ++k) h += 1.0 / k;
  return h;
}

/// Plain power series of 2F1(a,b;c;z), |z| < 1. Stops once the geometric
/// bound on the remaining tail drops below rel_eps * |sum|.
inline double hyp2f1_series(double a, double b, double c, double z, const Tolerance& tol = {}) {
  if (c <= 0.0 && c == std::floor(c)) throw DomainError("hyp2f1: c is a non-positive integer");
  if (!(std::abs(z) < 1.0)) throw DomainError("hyp2f1_series: requires |z| < 1");
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < tol.max_terms; ++n) {
    const double ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0));
    term *= ratio * z;
    sum += term;
    if (term == 0.0) return sum;
    // the term ratio decreases towards |z| once n exceeds the parameters
    const double r = std::abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2.0)) * z);
    if (r < 1.0 && n + 1 > std::abs(a) + std::abs(b) &&
        std::abs(term) * r / (1.0 - r) <= tol.rel_eps * std::abs(sum)) {
      return sum;
    }
  }
  std::ostringstream os;
  os << "hyp2f1_series: no convergence within " << tol.max_terms << " terms (a=" << a
     << ", b=" << b << ", c=" << c << ", z=" << z << ")";
  throw NumericError(os.str());
}

/// Gauss hypergeometric 2F1(a,b;c;z) for real parameters and 0 <= z < 1.
/// Uses the power series near zero and the z -> 1-z connection formula for
/// z > 0.75 when c-a-b is not an integer.
inline double hyp2f1(double a, double b, double c, double z, const Tolerance& tol = {}) {
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("hyp2f1: requires 0 <= z < 1");
  const bool terminating = (a <= 0.0 && a == std::floor(a)) || (b <= 0.0 && b == std::floor(b));
  const double s = c - a - b;
  if (z <= 0.75 || terminating || std::abs(s - std::round(s)) < 1e-6) {
    return hyp2f1_series(a, b, c, z, tol);
  }
  const double w = 1.0 - z;
  const double gc = gamma_fn(c);
  const double first = gc * gamma_fn(s) * rgamma(c - a) * rgamma(c - b) *
                       hyp2f1_series(a, b, 1.0 - s, w, tol);
  const double second = gc * gamma_fn(-s) * rgamma(a) * rgamma(b) * std::pow(w, s) *
                        hyp2f1_series(c - a, c - b, s + 1.0, w, tol);
  return first + second;
}

/// (1-t) * 2F1(1,1;1-delta;t), evaluated without loss of precision as t -> 1.
/// `one_minus_t` must equal 1-t; passing it separately keeps full relative
/// accuracy when t is the image of a large SIR.
inline double scaled_hyp2f1_11(double delta, double t, double one_minus_t, const Tolerance& tol = {}) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("hyp2f1_11: requires 0 < delta < 1");
  if (!(t >= 0.0 && one_minus_t > 0.0)) throw DomainError("hyp2f1_11: requires 0 <= t < 1");
  if (t <= 0.5) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < tol.max_terms; ++n) {
      term *= (n + 1.0) / (n + 1.0 - delta) * t;
      sum += term;
      const double r = (n + 2.0) / (n + 2.0 - delta) * t;
      if (term * r / (1.0 - r) <= tol.rel_eps * sum) return one_minus_t * sum;
    }
    throw NumericError("hyp2f1_11: series did not converge");
  }
  // connection to argument 1-t: the singular part is t^delta (1-t)^(-1-delta) / sinc(delta)
  const double singular = std::pow(t / one_minus_t, delta) / sinc_pi(delta);
  const double regular = delta / (1.0 + delta) * hyp2f1_series(1.0, 1.0, 2.0 + delta, one_minus_t, tol);
  return singular + one_minus_t * regular;
}

/// 2F1(1,1;1-delta;t) for 0 < delta < 1, 0 <= t < 1.
inline double hyp2f1_11(double delta, double t, const Tolerance& tol = {}) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("hyp2f1_11: requires 0 <= t < 1 (diverges at 1)");
  return scaled_hyp2f1_11(delta, t, 1.0 - t, tol) / (1.0 - t);
}

/// Kummer confluent hypergeometric 1F1(a;b;z). Negative z goes through
/// Kummer's transformation e^z 1F1(b-a;b;-z) to avoid alternating sums.
inline double hyp1f1(double a, double b, double z, const Tolerance& tol = {}) {
  if (b <= 0.0 && b == std::floor(b)) throw DomainError("hyp1f1: b is a non-positive integer");
  if (z == 0.0) return 1.0;
  if (z < 0.0) return std::exp(z) * hyp1f1(b - a, b, -z, tol);
  double term = 1.0;
  double sum = 1.0;
  double largest = 1.0;
  for (int n = 0; n < tol.max_terms; ++n) {
    term *= (a + n) / ((b + n) * (n + 1.0)) * z;
    sum += term;
    largest = std::max(largest, std::abs(term));
    if (term == 0.0) return sum;
    // near a zero of the function the sum is tiny; accuracy is then absolute
    if (n + 1 > z && n + 1 > std::abs(a) &&
        std::abs(term) <= tol.rel_eps * std::max(std::abs(sum), 1e-5 * largest)) {
      return sum;
    }
  }
  throw NumericError("hyp1f1: series did not converge within max_terms");
}

}  // namespace sigfrac
