#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sigfrac/approx.hpp"
#include "sigfrac/quadrature.hpp"
#include "sigfrac/rayleigh.hpp"

namespace {

using namespace sigfrac;
using namespace sigfrac::approx;
constexpr double pi = std::numbers::pi;

NetworkParams P(double d) { return NetworkParams::from_delta(d); }

TEST(Rational, Coefficients) {
  EXPECT_NEAR(rational_coeff(P(0.5), 0), 1.0, 1e-14);
  EXPECT_NEAR(rational_coeff(P(0.5), 1), 2.0, 1e-13);
  EXPECT_NEAR(rational_coeff(P(0.5), 2), 8.0 / 3.0, 1e-13);
  for (double d : {0.3, 0.7}) {
    EXPECT_NEAR(rational_coeff(P(d), 2), 2.0 / ((1 - d) * (2 - d)), 1e-13);
  }
}

TEST(Rational, SecondOrderDisplay) {
  for (double t = 0.0; t < 1.0; t += 0.05) {
    EXPECT_NEAR(rational_ccdf(P(0.5), 2, t), (1 + t + t * t) / (1 + 2 * t + 8.0 / 3.0 * t * t),
                1e-14);
  }
  EXPECT_EQ(rational_ccdf(P(0.3), 4, 0.0), 1.0);
}

TEST(Rational, ErrorMatchesDirectDifferenceWhereResolvable) {
  for (double d : {0.4, 0.5, 2.0 / 3.0}) {
    for (int s : {1, 2, 3}) {
      for (double t : {0.05, 0.1, 0.3}) {
        const double direct = rational_ccdf(P(d), s, t) - rayleigh::sf_ccdf_exact(P(d), t);
        EXPECT_NEAR(rational_ccdf_error(P(d), s, t), direct, 1e-13);
      }
    }
  }
}

TEST(Rational, TaylorCoefficientsMatchExact) {
  // finite-difference Taylor extraction of the difference: err / t^(s+1) tends to a constant
  for (double d : {0.4, 0.5}) {
    for (int s = 1; s <= 4; ++s) {
      const double c1 = rational_ccdf_error(P(d), s, 1e-3) / std::pow(1e-3, s + 1);
      const double c2 = rational_ccdf_error(P(d), s, 1e-4) / std::pow(1e-4, s + 1);
      EXPECT_NEAR(c1 / c2, 1.0, 0.02) << d << " " << s;
    }
  }
}

TEST(Poly, Values) {
  EXPECT_EQ(poly_ccdf(P(0.3), 1, 0.0), 1.0);
  EXPECT_EQ(poly_ccdf(P(0.3), 2, 0.0), 1.0);
  EXPECT_NEAR(poly_ccdf(P(0.5), 1, 0.2), 0.8, 1e-15);
  EXPECT_NEAR(poly_ccdf(P(0.5), 2, 0.2), 1 - 0.2 + 0.5 / 1.5 * 0.04, 1e-15);
  EXPECT_THROW(poly_ccdf(P(0.5), 3, 0.2), DomainError);
}

TEST(Convexity, Threshold) {
  EXPECT_EQ(convexity_sign(P(0.5)), 1);
  EXPECT_EQ(convexity_sign(P(0.3)), -1);
  EXPECT_EQ(convexity_sign(P((3.0 - std::sqrt(5.0)) / 2.0)), 0);
  EXPECT_EQ(convexity_sign(P(0.383)), 1);
  EXPECT_EQ(convexity_sign(P(0.381)), -1);
}

TEST(Convexity, BoundOrientation) {
  for (double d : {0.45, 0.5, 2.0 / 3.0}) {
    for (double t = 1e-3; t <= 0.1; t += 1e-3) {
      const double exact = rayleigh::sf_ccdf_exact(P(d), t);
      EXPECT_LE(poly_ccdf(P(d), 1, t), exact);
      EXPECT_GE(poly_ccdf(P(d), 2, t), exact);
    }
  }
  for (double t = 1e-3; t <= 0.1; t += 1e-3) {
    const double exact = rayleigh::sf_ccdf_exact(P(0.3), t);
    EXPECT_GE(poly_ccdf(P(0.3), 1, t), exact);
    EXPECT_GE(poly_ccdf(P(0.3), 2, t), exact);
  }
}

TEST(Tail, Values) {
  EXPECT_EQ(tail_ccdf(P(0.4), 1, 1.0), 0.0);
  EXPECT_EQ(tail_ccdf(P(0.4), 2, 1.0), 0.0);
  EXPECT_NEAR(tail_ccdf(P(0.5), 1, 0.5), 2.0 / pi * std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(tail_ccdf(P(0.5), 1, 0.5), 0.45016, 1e-5);
  EXPECT_THROW(tail_ccdf(P(0.5), 1, 0.0), DomainError);
}

TEST(Tail, SecondOrderAccurateAboveTwoThirds) {
  // grid scan: worst case just above 2/3 is 2.55% (delta 0.4) and 2.99% (delta 2/3);
  // below 2% from t = 0.74 on
  for (double d : {0.4, 0.5, 2.0 / 3.0}) {
    for (double t = 2.0 / 3.0 + 1e-9; t < 1.0; t += 1e-3) {
      const double err = std::abs(tail_ccdf(P(d), 2, t) / rayleigh::sf_ccdf_exact(P(d), t) - 1.0);
      EXPECT_LT(err, 0.03) << d << " " << t;
      if (t >= 0.74) EXPECT_LT(err, 0.02) << d << " " << t;
    }
  }
}

TEST(Best, Values) {
  EXPECT_EQ(best_sf_ccdf(P(0.5), 0.0), 1.0);
  EXPECT_EQ(best_sf_ccdf(P(0.5), 1.0), 0.0);
  EXPECT_NEAR(best_sf_ccdf(P(0.5), 0.5), std::sqrt(1.0 / 3.0), 1e-15);
  for (double d : {0.3, 0.5, 0.8}) {
    const double h = 1e-7;
    EXPECT_NEAR((best_sf_ccdf(P(d), h) - 1.0) / h, -P(d).misr(), 1e-5);
    for (double th = 0.0; th < 100.0; th += 0.7) {
      EXPECT_NEAR(best_sir_ccdf(P(d), th), best_sf_ccdf(P(d), th / (1 + th)), 1e-14);
    }
  }
}

TEST(Best, TailExponentIsDelta) {
  for (double d : {0.3, 0.5, 0.8}) {
    const double e1 = 1e-8, e2 = 1e-9;
    const double slope = std::log(best_sf_ccdf(P(d), 1 - e1) / best_sf_ccdf(P(d), 1 - e2)) /
                         std::log(e1 / e2);
    EXPECT_NEAR(slope, d, 1e-3);
  }
}

TEST(Best, Inverse) {
  EXPECT_EQ(best_inverse(P(0.5), 1.0), 0.0);
  EXPECT_NEAR(best_inverse(P(0.5), std::sqrt(1.0 / 3.0)), 0.5, 1e-14);
  EXPECT_THROW(best_inverse(P(0.5), 0.0), DomainError);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 1.0), tu(0.0, 0.999);
  for (int i = 0; i < 100; ++i) {
    const double r = u(rng), t = tu(rng);
    for (double d : {0.3, 0.5, 0.8}) {
      EXPECT_NEAR(best_sf_ccdf(P(d), best_inverse(P(d), r)), r, 1e-12);
      EXPECT_NEAR(best_inverse(P(d), best_sf_ccdf(P(d), t)), t, 1e-12);
    }
  }
}

TEST(GeneralizedBeta, ReducesToSimpleTightForm) {
  for (double d : {0.3, 0.5, 0.7}) {
    const auto g = GBParams::best(P(d));
    EXPECT_NEAR(g.a, 1.0, 1e-15);
    EXPECT_NEAR(g.b, 1.0 - d, 1e-13);
    const double mu = P(d).misr();
    for (double t = 0.01; t < 1.0; t += 0.01) {
      const double eq5 = mu / (std::pow(1 - t, 1 - d) * std::pow(1 + mu * t, 1 + d));
      EXPECT_NEAR(gb_pdf(g, t) / eq5, 1.0, 1e-12);
    }
  }
}

TEST(GeneralizedBeta, DensityAtZeroIsMisr) {
  for (double d : {0.4, 0.5, 2.0 / 3.0}) {
    for (auto [p, q] : {std::pair{0.7, 0.4}, {0.9, 0.5}, {1.3, 1.7}}) {
      const auto g = GBParams::from_shape(p, q, P(d).misr());
      EXPECT_NEAR(gb_pdf(g, 1e-12), P(d).misr(), 1e-6);
    }
  }
}

TEST(GeneralizedBeta, TableRowsNormalized) {
  const double rows[][3] = {{0.4, 0.7385, 0.4164}, {0.5, 0.8648, 0.5276}, {2.0 / 3.0, 0.9296, 0.7089}};
  for (const auto& row : rows) {
    const auto g = GBParams::from_shape(row[1], row[2], P(row[0]).misr());
    const double mass = quad([&](double t, double tc) { return gb_pdf_from_complement(g, t, tc); },
                             0.0, 1.0, kQuadTolerance, {1.0, g.q});
    EXPECT_NEAR(mass, 1.0, 1e-8);
  }
}

TEST(GeneralizedBeta, MomentFormulaAgainstQuadrature) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pu(0.3, 3.0), qu(0.2, 3.0), du(0.2, 0.8);
  int checked = 0;
  while (checked < 20) {
    const auto g = GBParams::from_shape(pu(rng), qu(rng), P(du(rng)).misr());
    if (!(g.b > 0.0 && g.b <= 1.0)) continue;
    for (int k : {1, 2}) {
      const double direct =
          quad([&](double t, double tc) { return std::pow(t, k) * gb_pdf_from_complement(g, t, tc); },
               0.0, 1.0, {1e-12, 1, 4000}, {1.0, g.q});
      EXPECT_NEAR(gb_moment(g, k), direct, 1e-7) << g.p << " " << g.q << " " << g.b;
    }
    ++checked;
  }
}

TEST(GeneralizedBeta, TableRowMomentsNearExact) {
  const auto g = GBParams::from_shape(0.8648, 0.5276, 1.0);
  EXPECT_NEAR(g.b, 0.5554, 1e-4);
  EXPECT_NEAR(gb_moment(g, 1), rayleigh::sf_moment_exact(P(0.5), 1), 1e-4);
  EXPECT_NEAR(gb_moment(g, 2), rayleigh::sf_moment_exact(P(0.5), 2), 1e-4);
}

TEST(GeneralizedBeta, FitSolvesMomentSystem) {
  // Reference solutions of the moment equations from an independent
  // 30-digit computation (mpmath hyp2f1, quad and findroot).
  struct Row { double d, b, p, q; };
  const Row rows[] = {{0.4, 0.7157935327533005, 0.7394809534957832, 0.41649655908048455},
                      {0.5, 0.5554276760354547, 0.8678782160633062, 0.5282991671411198},
                      {2.0 / 3.0, 0.3597178257891786, 0.9292410312898942, 0.7086943783790662}};
  for (const auto& r : rows) {
    const FitResult fit = gb_fit(P(r.d));
    EXPECT_LE(fit.residual, 1e-6);
    EXPECT_NEAR(fit.params.b, r.b, 1e-5);
    EXPECT_NEAR(fit.params.p, r.p, 1e-5);
    EXPECT_NEAR(fit.params.q, r.q, 1e-5);
    EXPECT_NEAR(fit.params.a, 1.0 / fit.params.p, 1e-15);
    EXPECT_NEAR(fit.achieved_moments[0], fit.target_moments[0], 1e-6 * fit.target_moments[0]);
    EXPECT_NEAR(fit.achieved_moments[1], fit.target_moments[1], 1e-6 * fit.target_moments[1]);
  }
}

TEST(GeneralizedBeta, FittedDensityCloseToExact) {
  const auto p = P(0.5);
  const auto fit = gb_fit(p);
  for (double t = 0.05; t < 0.96; t += 0.05) {
    const double ccdf_gb = quad([&](double s, double sc) { return gb_pdf_from_complement(fit.params, s, sc); },
                                t, 1.0, kQuadTolerance, {1.0, fit.params.q});
    EXPECT_NEAR(ccdf_gb, rayleigh::sf_ccdf_exact(p, t), 5e-3) << t;
  }
}

TEST(SimpleTight, TailPreconstantGap) {
  double max_gap = 0.0, arg = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double d = i / 1000.0;
    const double gap = d * std::pow(1 - d, d) - d * sinc_pi(d);
    EXPECT_GE(gap, 0.0);
    if (gap > max_gap) {
      max_gap = gap;
      arg = d;
    }
  }
  EXPECT_GE(max_gap, 0.04);
  EXPECT_LE(max_gap, 0.05);
  EXPECT_GE(arg, 0.6);
  EXPECT_LE(arg, 0.7);
}

TEST(Nakagami, SmallTAsymptote) {
  EXPECT_NEAR(nakagami_cdf_constant(1.0), 1.0, 1e-15);
  EXPECT_NEAR(nakagami_cdf_constant(2.0), 2.0, 1e-14);
  for (double t = 0.0; t <= 1.0; t += 0.1) {
    EXPECT_NEAR(nba_m_cdf_asymptote(P(0.4), 1, t), poly_ccdf(P(0.4), 1, t), 1e-15);
  }
  // 0.5 * 3.75 / (0.25 * 1.5) = 5; also 2 * (2 + 0.5 * 1.5 / 1.5)
  EXPECT_NEAR(nba_m_coefficient(P(0.5), 2), 5.0, 1e-12);
  for (double d = 0.05; d < 1.0; d += 0.05) {
    const double mu = d / (1 - d);
    const double display = d * (3 + 2 * d - d * d) / ((1 - d) * (1 - d) * (2 - d));
    EXPECT_NEAR(nba_m_coefficient(P(d), 2), display, 1e-12 * display);
    EXPECT_NEAR(nba_m_coefficient(P(d), 2), 2 * (2 * mu * mu + d * 1.5 / (2 - d)), 1e-12 * display);
  }
  EXPECT_THROW(nba_m_coefficient(P(0.5), 3), DomainError);
}

TEST(Nakagami, ExperimentalShape) {
  const auto g = gb_params_for_nakagami(P(0.5), 2.0);
  EXPECT_EQ(g.p, 2.0);
  EXPECT_EQ(g.q, 0.5);
  EXPECT_NEAR(g.a, 0.5, 1e-15);
}

TEST(Markov, Values) {
  EXPECT_EQ(markov_lower_bound(P(0.5), 0.0), 1.0);
  EXPECT_NEAR(markov_lower_bound(P(0.5), 0.25), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(markov_lower_bound(P(0.5), 0.5), DomainError);
}

}  // namespace
