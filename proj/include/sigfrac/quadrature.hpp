#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) quadrature with optional
// power-law endpoint substitution.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <type_traits>
#include <vector>

#include "sigfrac/error.hpp"
#include "sigfrac/specfun.hpp"

namespace sigfrac {

/// Declared endpoint behaviour: the integrand behaves like (x-a)^(left-1)
/// near a and (b-x)^(right-1) near b. 1 means regular.
struct EndpointExponents {
  double left = 1.0;
  double right = 1.0;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

/// Default accuracy for integrals: 1e-10 relative, up to 2000 subintervals.
inline constexpr Tolerance kQuadTolerance{1e-10, 2'000'000, 2000};

namespace detail {

struct GK21 {
  static constexpr std::array<double, 11> xgk = {
      .995657163025808080735527280689003, .973906528517171720077964012084452,
      .930157491355708226001207180059508, .865063366688984510732096688423493,
      .780817726586416897063717578345042, .679409568299024406234327365114874,
      .562757134668604683339000099272694, .433395394129247190799265943165784,
      .294392862701460198131126603103866, .14887433898163121088482600112972,
      0.};
  static constexpr std::array<double, 11> wgk = {
      .011694638867371874278064396062192, .03255816230796472747881897245939,
      .05475589657435199603138130024458,  .07503967481091995276704314091619,
      .093125454583697605535065465083366, .109387158802297641899210590325805,
      .123491976262065851077958109831074, .134709217311473325928054001771707,
      .142775938577060080797094273138717, .147739104901338491374841515972068,
      .149445554002916905664936468389821};
  static constexpr std::array<double, 5> wg = {
      .066671344308688137593568809893332, .149451349150580593145776339657697,
      .219086362515982043995534934228163, .269266719309996355091226921569469,
      .295524224714752870173892994651338};
};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk21(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * GK21::wgk[10];
  double resg = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * GK21::xgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    resk += GK21::wgk[j] * fsum;
    if (j % 2 == 1) resg += GK21::wg[j / 2] * fsum;
  }
  const double err = std::abs((resk - resg) * half);
  return {a, b, resk * half, err};
}

template <class F>
QuadResult adaptive(const F& f, double a, double b, const Tolerance& tol) {
  std::priority_queue<Segment> heap;
  std::vector<Segment> frozen;  // intervals too narrow to split in floating point
  heap.push(gk21(f, a, b));
  double total = heap.top().value;
  double error = heap.top().error;
  int intervals = 1;
  while (!heap.empty() &&
         error > std::max(tol.rel_eps * std::abs(total), 50 * std::numeric_limits<double>::min())) {
    if (intervals >= tol.max_iter) {
      std::ostringstream os;
      os << "quad: no convergence after " << intervals << " subintervals, estimated error "
         << error << " on value " << total;
      throw NumericError(os.str(), error);
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      frozen.push_back(worst);
      continue;
    }
    const Segment left = gk21(f, worst.a, mid);
    const Segment right = gk21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error = std::max(0.0, error + left.error + right.error - worst.error);
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // recompute the sums to shed accumulated update error
  QuadResult out{0.0, 0.0, intervals};
  for (const Segment& s : frozen) {
    out.value += s.value;
    out.abs_error += s.error;
  }
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.abs_error += heap.top().error;
    heap.pop();
  }
  return out;
}

// x = a + u^m maps a (x-a)^(g-1) singularity to u^(m g - 1); m = ceil(g)/g
// makes the leading power an integer.
inline double substitution_power(double exponent) {
  if (!(exponent > 0.0)) throw DomainError("quad: endpoint exponents must be positive");
  return std::ceil(exponent) / exponent;
}

}  // namespace detail

/// Integral of f over [a,b] with relative accuracy tol.rel_eps. Endpoint
/// singularities of power type are removed by substitution when declared.
///
/// f may take either (x) or (x, b - x). The two-argument form receives the
/// distance to the right endpoint computed without cancellation, which
/// integrands singular at b need for full accuracy.
template <class F>
QuadResult quad_detailed(F&& f, double a, double b, const Tolerance& tol = kQuadTolerance,
                         EndpointExponents ends = {}) {
  tol.validate();
  if (!(a < b)) {
    if (a == b) return {};
    if constexpr (std::is_invocable_v<F&, double, double>) {
      throw DomainError("quad: reversed limits are not supported for complement-aware integrands");
    } else {
      QuadResult r = quad_detailed(f, b, a, tol, {ends.right, ends.left});
      r.value = -r.value;
      return r;
    }
  }
  constexpr bool aware = std::is_invocable_v<F&, double, double>;
  auto call = [&f](double x, double xc) -> double {
    if constexpr (aware) {
      return f(x, xc);
    } else {
      (void)xc;
      return f(x);
    }
  };
  const double ml = detail::substitution_power(ends.left);
  const double mr = detail::substitution_power(ends.right);
  if constexpr (!aware) {
    if (ml == 1.0 && mr == 1.0) return detail::adaptive(f, a, b, tol);
  }

  // split at the midpoint; each half is integrated in the distance to its endpoint
  const double half = 0.5 * (b - a);
  Tolerance part = tol;
  part.rel_eps = tol.rel_eps * 0.5;
  auto left = [&](double u) {
    const double dx = std::pow(u, ml);
    if (dx <= 0.0) return 0.0;  // substituted integrand is bounded; the endpoint has measure zero
    return call(a + dx, (b - a) - dx) * ml * std::pow(u, ml - 1.0);
  };
  auto right = [&](double u) {
    const double dx = std::pow(u, mr);
    if (dx <= 0.0) return 0.0;
    return call(b - dx, dx) * mr * std::pow(u, mr - 1.0);
  };
  const QuadResult l = detail::adaptive(left, 0.0, std::pow(half, 1.0 / ml), part);
  const QuadResult r = detail::adaptive(right, 0.0, std::pow(half, 1.0 / mr), part);
  return {l.value + r.value, l.abs_error + r.abs_error, l.intervals + r.intervals};
}

template <class F>
double quad(F&& f, double a, double b, const Tolerance& tol = kQuadTolerance,
            EndpointExponents ends = {}) {
  return quad_detailed(std::forward<F>(f), a, b, tol, ends).value;
}

/// Integral over [a, inf) via x = a + u/(1-u). `left` declares the exponent at a.
template <class F>
double quad_to_infinity(F&& f, double a, const Tolerance& tol = kQuadTolerance, double left = 1.0) {
  auto g = [&](double u, double one_minus_u) {
    const double x = a + u / one_minus_u;
    if (!std::isfinite(x)) return 0.0;
    return f(x) / (one_minus_u * one_minus_u);
  };
  return quad_detailed(g, 0.0, 1.0, tol, {left, 1.0}).value;
}

}  // namespace sigfrac
