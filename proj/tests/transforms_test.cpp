#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sigfrac/quadrature.hpp"
#include "sigfrac/transforms.hpp"

namespace {

using namespace sigfrac;

TEST(TMap, Values) {
  EXPECT_EQ(t_map(0.0), 0.0);
  EXPECT_EQ(t_map(1.0), 0.5);
  EXPECT_EQ(t_map(3.0), 0.75);
  EXPECT_THROW(t_map(-1e-9), DomainError);
  EXPECT_EQ(t_inv(0.0), 0.0);
  EXPECT_EQ(t_inv(0.5), 1.0);
  EXPECT_EQ(t_inv(0.75), 3.0);
  EXPECT_THROW(t_inv(1.0), DomainError);
}

TEST(TMap, InverseRoundTripOnLogGrid) {
  for (double x = 1e-6; x <= 1e6; x *= 1.1) EXPECT_NEAR(t_inv(t_map(x)) / x, 1.0, 1e-14 * (1 + x));
}

TEST(TMap, SmallArgumentLinearity) {
  for (double th = 1e-8; th <= 0.01; th *= 1.3) EXPECT_LE(std::abs(t_map(th) - th), th * th);
}

TEST(TMap, Monotone) {
  double prev = -1.0;
  for (double x = 0.0; x < 100.0; x += 0.37) {
    EXPECT_GT(t_map(x), prev);
    prev = t_map(x);
  }
}

TEST(Units, Conversions) {
  EXPECT_EQ(db_to_linear(0.0), 1.0);
  EXPECT_NEAR(db_to_linear(10.0), 10.0, 1e-14);
  EXPECT_EQ(mh_to_linear(0.5), 1.0);
  EXPECT_THROW(mh_to_linear(1.0), DomainError);
  EXPECT_THROW(mh_to_linear(-0.1), DomainError);
  EXPECT_THROW(linear_to_db(0.0), DomainError);
  EXPECT_EQ(parse_axis_unit("dB"), AxisUnit::dB);
  EXPECT_THROW(parse_axis_unit("furlong"), DomainError);
}

TEST(Sfn, IsTMap) {
  EXPECT_EQ(sinr_to_sfn(0.0), 0.0);
  EXPECT_EQ(sinr_to_sfn(1.0), 0.5);
  EXPECT_NEAR(sinr_to_sfn(9.0), 0.9, 1e-15);
  EXPECT_THROW(sinr_to_sfn(-2.0), DomainError);
}

TEST(CcdfTransform, Examples) {
  auto one = sir_ccdf_to_sf_ccdf([](double) { return 1.0; });
  EXPECT_EQ(one(0.3), 1.0);
  auto lin = sir_ccdf_to_sf_ccdf([](double th) { return 1.0 / (1.0 + th); });
  for (double t = 0.0; t < 1.0; t += 0.01) EXPECT_NEAR(lin(t), 1.0 - t, 1e-14);
  EXPECT_EQ(lin(1.0), 0.0);
}

TEST(CcdfTransform, RoundTrip) {
  auto sir = [](double th) { return std::exp(-std::sqrt(th)); };
  auto back = sf_ccdf_to_sir_ccdf(sir_ccdf_to_sf_ccdf(sir));
  for (double th = 0.0; th < 50.0; th += 0.25) EXPECT_NEAR(back(th), sir(th), 1e-12);
}

TEST(PdfTransform, Examples) {
  auto sir = sf_pdf_to_sir_pdf([](double) { return 1.0; });
  for (double th : {0.0, 0.5, 3.0, 40.0}) EXPECT_NEAR(sir(th), 1.0 / ((1 + th) * (1 + th)), 1e-15);
  auto sf = sir_pdf_to_sf_pdf([](double th) { return std::exp(-th); });
  for (double t : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(sf(t), std::exp(-t / (1 - t)) / ((1 - t) * (1 - t)), 1e-14);
  }
}

TEST(PdfTransform, MassConservation) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> shape(0.6, 3.0);
  for (int i = 0; i < 10; ++i) {
    // gamma(k, 1) SIR densities
    const double k = shape(rng);
    const double norm = std::tgamma(k);
    auto sir_pdf = [k, norm](double th) { return std::pow(th, k - 1) * std::exp(-th) / norm; };
    auto sf_pdf = sir_pdf_to_sf_pdf(sir_pdf);
    const double mass = quad(sf_pdf, 0.0, 1.0, kQuadTolerance, {k, 1.0});
    EXPECT_NEAR(mass, 1.0, 1e-6) << k;
    auto back = sf_pdf_to_sir_pdf(sf_pdf);
    EXPECT_NEAR(quad_to_infinity(back, 0.0, kQuadTolerance, k), 1.0, 1e-6);
  }
}

TEST(Reaxis, UnitConversions) {
  DistributionCurve c{{{1.0, 0.5}}, AxisUnit::linear, CurveKind::ccdf, Variable::SIR};
  EXPECT_NEAR(reaxis(c, AxisUnit::dB).points[0].arg, 0.0, 1e-15);
  EXPECT_EQ(reaxis(c, AxisUnit::MH).points[0].arg, 0.5);
  EXPECT_EQ(reaxis(c, AxisUnit::MH).points[0].value, 0.5);
}

TEST(Reaxis, DbMhRoundTrip) {
  DistributionCurve c;
  c.axis_unit = AxisUnit::dB;
  c.variable = Variable::SIR;
  for (int i = 0; i < 50; ++i) c.points.push_back({-20.0 + 40.0 * i / 49.0, 1.0 - i / 49.0});
  const auto back = reaxis(reaxis(c, AxisUnit::MH), AxisUnit::dB);
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(back.points[i].arg, c.points[i].arg, 1e-12);
}

TEST(Reaxis, MhArgumentsOutsideUnitIntervalRejected) {
  DistributionCurve c{{{1.2, 0.5}}, AxisUnit::MH, CurveKind::ccdf, Variable::SIR};
  EXPECT_THROW(reaxis(c, AxisUnit::linear), DomainError);
}

TEST(Curve, Invariants) {
  DistributionCurve c{{{0.0, 1.0}, {0.5, 0.4}, {1.0, 0.0}}, AxisUnit::linear, CurveKind::ccdf,
                      Variable::SF};
  EXPECT_TRUE(c.satisfies_distribution_invariants());
  c.points[1].value = 1.2;
  EXPECT_FALSE(c.satisfies_distribution_invariants());
}

}  // namespace
