#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sigfrac/quadrature.hpp"
#include "sigfrac/rayleigh.hpp"

namespace {

using namespace sigfrac;
using rayleigh::sf_ccdf_exact;
using rayleigh::sir_ccdf_exact;

// Oracle: 1/2F1(1,-delta;1-delta;-theta) summed directly, valid for theta < 1.
// Coefficient of (-theta)^n is -delta/(n-delta) for n >= 1.
double direct_sir_ccdf(double delta, double theta) {
  double sum = 1.0, power = 1.0;
  for (int n = 1; n < 20000; ++n) {
    power *= -theta;
    sum += -delta / (n - delta) * power;
  }
  return 1.0 / sum;
}

const double kDeltas[] = {0.25, 0.4, 0.5, 2.0 / 3.0, 0.8};

TEST(Misr, Values) {
  EXPECT_DOUBLE_EQ(rayleigh::misr(NetworkParams::from_delta(0.5)), 1.0);
  EXPECT_DOUBLE_EQ(rayleigh::misr(NetworkParams::from_delta(2.0 / 3.0)), 2.0);
  EXPECT_DOUBLE_EQ(rayleigh::misr(NetworkParams::from_delta(0.4)), 2.0 / 3.0);
}

TEST(Params, Validation) {
  EXPECT_THROW(NetworkParams::from_delta(1.0), DomainError);
  EXPECT_THROW(NetworkParams::from_delta(0.0), DomainError);
  EXPECT_THROW(NetworkParams::from_alpha(2.0), DomainError);
  EXPECT_DOUBLE_EQ(NetworkParams::from_alpha(4.0).delta(), 0.5);
}

TEST(SfCcdf, Endpoints) {
  for (double d : kDeltas) {
    const auto p = NetworkParams::from_delta(d);
    EXPECT_EQ(sf_ccdf_exact(p, 0.0), 1.0);
    EXPECT_EQ(sf_ccdf_exact(p, 1.0), 0.0);
  }
  EXPECT_THROW(sf_ccdf_exact(NetworkParams::from_delta(0.5), 1.01), DomainError);
  EXPECT_THROW(sf_ccdf_exact(NetworkParams::from_delta(0.5), -0.01), DomainError);
}

TEST(SirCcdf, EqualsSfCcdfThroughT) {
  const auto p = NetworkParams::from_delta(0.5);
  EXPECT_EQ(sir_ccdf_exact(p, 0.0), 1.0);
  EXPECT_NEAR(sir_ccdf_exact(p, 1.0), sf_ccdf_exact(p, 0.5), 1e-15);
  for (double th = 1e-4; th < 1e4; th *= 1.5) {
    EXPECT_NEAR(sir_ccdf_exact(p, th), sf_ccdf_exact(p, th / (1 + th)), 1e-12);
  }
  EXPECT_THROW(sir_ccdf_exact(p, -1.0), DomainError);
}

TEST(SirCcdf, AgreesWithDirectHypergeometricForm) {
  for (double d : kDeltas) {
    const auto p = NetworkParams::from_delta(d);
    for (double th = 0.01; th <= 0.9; th += 0.01) {
      EXPECT_NEAR(sir_ccdf_exact(p, th), direct_sir_ccdf(d, th), 1e-9) << d << " " << th;
    }
  }
}

TEST(SfCcdf, MonotoneOnFineGrid) {
  for (double d : kDeltas) {
    const auto p = NetworkParams::from_delta(d);
    double prev = 1.0;
    for (int i = 1; i <= 1000; ++i) {
      const double v = sf_ccdf_exact(p, i / 1000.0);
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(SfCcdf, IncreasesAsDeltaDecreases) {
  for (double t = 0.05; t < 1.0; t += 0.05) {
    for (std::size_t i = 1; i < std::size(kDeltas); ++i) {
      EXPECT_GT(sf_ccdf_exact(NetworkParams::from_delta(kDeltas[i - 1]), t),
                sf_ccdf_exact(NetworkParams::from_delta(kDeltas[i]), t));
    }
  }
}

TEST(SfCcdf, TailBehaviourNearOne) {
  // leading behaviour sinc(delta) (1-t)^delta with no cancellation very close to 1
  for (double d : kDeltas) {
    const auto p = NetworkParams::from_delta(d);
    for (double e : {1e-7, 1e-10, 1e-13}) {
      const double second_order =
          std::sin(std::numbers::pi * d) / (std::numbers::pi * d) * std::pow(e, d) * (1 + d * e);
      EXPECT_NEAR(rayleigh::sf_ccdf_from_complement(p, 1.0 - e, e) / second_order, 1.0,
                  2 * std::pow(e, 1 + d) + e * e + 1e-14);
    }
  }
}

TEST(SfPdf, LimitsAndNormalization) {
  EXPECT_NEAR(rayleigh::sf_pdf_exact(NetworkParams::from_delta(0.5), 1e-7), 1.0, 1e-5);
  EXPECT_NEAR(rayleigh::sf_pdf_exact(NetworkParams::from_delta(0.4), 1e-7), 2.0 / 3.0, 1e-5);
  for (double d : kDeltas) {
    const auto p = NetworkParams::from_delta(d);
    const double mass =
        quad([&](double t, double tc) { return rayleigh::sf_pdf_from_complement(p, t, tc); }, 0.0,
             1.0, {1e-9, 1, 2000}, {1.0, d});
    EXPECT_NEAR(mass, 1.0, 1e-6) << d;
    // f(t) ~ delta sinc(delta) (1-t)^(delta-1) as t -> 1
    const double e = 1e-9;
    const double lead = d * std::sin(std::numbers::pi * d) / (std::numbers::pi * d) * std::pow(e, d - 1);
    EXPECT_NEAR(rayleigh::sf_pdf_from_complement(p, 1.0 - e, e) / lead, 1.0, 1e-6);
  }
  EXPECT_THROW(rayleigh::sf_pdf_exact(NetworkParams::from_delta(0.5), 0.0), DomainError);
}

TEST(SfMoment, Properties) {
  EXPECT_GT(rayleigh::sf_moment_exact(NetworkParams::from_delta(0.05), 1), 0.9);
  for (double d = 0.05; d < 1.0; d += 0.05) {
    const auto p = NetworkParams::from_delta(d);
    const double m1 = rayleigh::sf_moment_exact(p, 1);
    const double m2 = rayleigh::sf_moment_exact(p, 2);
    EXPECT_GT(m1, 0.0);
    EXPECT_LT(m1, 1.0);
    EXPECT_LE(m2, m1);
  }
  EXPECT_THROW(rayleigh::sf_moment_exact(NetworkParams::from_delta(0.5), 0), DomainError);
}

TEST(SfMoment, MeanEqualsIntegralOfPdf) {
  const auto p = NetworkParams::from_delta(0.5);
  const double via_pdf = quad(
      [&](double t, double tc) { return t * rayleigh::sf_pdf_from_complement(p, t, tc); }, 0.0,
      1.0, {1e-9, 1, 2000}, {1.0, 0.5});
  EXPECT_NEAR(rayleigh::sf_moment_exact(p, 1), via_pdf, 1e-6);
}

}  // namespace
