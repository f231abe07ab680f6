#pragma once

// The map T(x) = x/(1+x) between SIR and signal fraction, unit conversions
// (linear, dB, MH) and the induced transforms of ccdfs and pdfs.

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sigfrac/error.hpp"

namespace sigfrac {

/// T(x) = x/(1+x): [0,inf) -> [0,1).
inline double t_map(double x) {
  if (!(x >= 0.0)) throw DomainError("t_map: argument must be >= 0");
  if (std::isinf(x)) return 1.0;
  return x / (1.0 + x);
}

/// T^{-1}(t) = t/(1-t): [0,1) -> [0,inf).
inline double t_inv(double t) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("t_inv: argument must lie in [0,1)");
  return t / (1.0 - t);
}

/// Signal fraction with noise from the SINR; the same map T.
inline double sinr_to_sfn(double sinr) {
  if (!(sinr >= 0.0)) throw DomainError("sinr_to_sfn: SINR must be >= 0");
  return t_map(sinr);
}

enum class AxisUnit { linear, dB, MH };

inline std::string_view to_string(AxisUnit u) {
  switch (u) {
    case AxisUnit::linear: return "linear";
    case AxisUnit::dB: return "dB";
    case AxisUnit::MH: return "MH";
  }
  return "linear";
}

inline AxisUnit parse_axis_unit(std::string_view s) {
  if (s == "linear" || s == "lin") return AxisUnit::linear;
  if (s == "dB" || s == "db") return AxisUnit::dB;
  if (s == "MH" || s == "mh") return AxisUnit::MH;
  throw DomainError("unknown axis unit '" + std::string(s) + "' (expected linear, dB or MH)");
}

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

inline double linear_to_db(double x) {
  if (!(x > 0.0)) throw DomainError("linear_to_db: argument must be positive");
  return 10.0 * std::log10(x);
}

/// x MH = x/(1-x).
inline double mh_to_linear(double x_mh) {
  if (!(x_mh >= 0.0 && x_mh < 1.0)) throw DomainError("MH values must lie in [0,1)");
  return t_inv(x_mh);
}

inline double linear_to_mh(double x) { return t_map(x); }

inline double to_linear(double x, AxisUnit from) {
  switch (from) {
    case AxisUnit::dB: return db_to_linear(x);
    case AxisUnit::MH: return mh_to_linear(x);
    case AxisUnit::linear: break;
  }
  return x;
}

inline double from_linear(double x, AxisUnit to) {
  switch (to) {
    case AxisUnit::dB: return linear_to_db(x);
    case AxisUnit::MH: return linear_to_mh(x);
    case AxisUnit::linear: break;
  }
  return x;
}

// ccdf and pdf transforms are lazy compositions; nothing is resampled.

/// F_SF(t) = F_SIR(T^{-1}(t)) for a ccdf of the SIR.
template <class F>
auto sir_ccdf_to_sf_ccdf(F sir_ccdf) {
  return [f = std::move(sir_ccdf)](double t) {
    if (t >= 1.0) return static_cast<double>(f(std::numeric_limits<double>::infinity()));
    return static_cast<double>(f(t_inv(t)));
  };
}

/// F_SIR(theta) = F_SF(T(theta)).
template <class F>
auto sf_ccdf_to_sir_ccdf(F sf_ccdf) {
  return [f = std::move(sf_ccdf)](double theta) { return static_cast<double>(f(t_map(theta))); };
}

/// f_SF(t) = f_SIR(t/(1-t)) / (1-t)^2.
template <class F>
auto sir_pdf_to_sf_pdf(F sir_pdf) {
  return [f = std::move(sir_pdf)](double t) {
    const double w = 1.0 - t;
    return static_cast<double>(f(t_inv(t))) / (w * w);
  };
}

/// f_SIR(theta) = f_SF(theta/(1+theta)) / (1+theta)^2.
template <class F>
auto sf_pdf_to_sir_pdf(F sf_pdf) {
  return [f = std::move(sf_pdf)](double theta) {
    const double w = 1.0 + theta;
    return static_cast<double>(f(t_map(theta))) / (w * w);
  };
}

enum class CurveKind { ccdf, cdf, pdf };
enum class Variable { SF, SIR };

inline std::string_view to_string(CurveKind k) {
  switch (k) {
    case CurveKind::ccdf: return "ccdf";
    case CurveKind::cdf: return "cdf";
    case CurveKind::pdf: return "pdf";
  }
  return "ccdf";
}

inline std::string_view to_string(Variable v) { return v == Variable::SF ? "SF" : "SIR"; }

struct CurvePoint {
  double arg;
  double value;
};

/// Ordered (argument, value) samples of a distribution function.
struct DistributionCurve {
  std::vector<CurvePoint> points;
  AxisUnit axis_unit = AxisUnit::linear;
  CurveKind kind = CurveKind::ccdf;
  Variable variable = Variable::SF;

  /// Strictly increasing arguments; ccdf/cdf values in [0,1]; ccdf
  /// non-increasing. Approximation curves are raw formula values and may
  /// legitimately fail the value checks.
  bool satisfies_distribution_invariants(double slack = 0.0) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      if (i > 0 && !(p.arg > points[i - 1].arg)) return false;
      if (kind != CurveKind::pdf && (p.value < -slack || p.value > 1.0 + slack)) return false;
      if (kind == CurveKind::ccdf && i > 0 && p.value > points[i - 1].value + slack) return false;
      if (kind == CurveKind::cdf && i > 0 && p.value < points[i - 1].value - slack) return false;
    }
    return true;
  }
};

/// Same values with arguments expressed in another unit.
inline DistributionCurve reaxis(const DistributionCurve& curve, AxisUnit target) {
  DistributionCurve out = curve;
  out.axis_unit = target;
  for (auto& p : out.points) p.arg = from_linear(to_linear(p.arg, curve.axis_unit), target);
  return out;
}

}  // namespace sigfrac
