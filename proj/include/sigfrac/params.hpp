#pragma once

#include <cmath>
#include <sstream>

#include "sigfrac/error.hpp"

namespace sigfrac {

/// Path loss exponent alpha > 2 and delta = 2/alpha in (0,1). Every
/// distribution in the library depends on delta alone.
class NetworkParams {
 public:
  static NetworkParams from_delta(double delta) {
    check(delta);
    return NetworkParams(delta, 2.0 / delta);
  }

  static NetworkParams from_alpha(double alpha) {
    if (!(alpha > 2.0) || !std::isfinite(alpha)) {
      std::ostringstream os;
      os << "path loss exponent must satisfy alpha > 2 (0 < delta < 1), got alpha = " << alpha;
      throw DomainError(os.str());
    }
    return NetworkParams(2.0 / alpha, alpha);
  }

  double delta() const noexcept { return delta_; }
  double alpha() const noexcept { return alpha_; }

  /// Mean interference-to-signal ratio delta/(1-delta).
  double misr() const noexcept { return delta_ / (1.0 - delta_); }

 private:
  NetworkParams(double delta, double alpha) : delta_(delta), alpha_(alpha) {}

  static void check(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
      std::ostringstream os;
      os << "delta must satisfy 0 < delta < 1, got " << delta;
      throw DomainError(os.str());
    }
  }

  double delta_;
  double alpha_;
};

}  // namespace sigfrac
