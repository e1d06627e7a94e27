#include <gtest/gtest.h>

#include <cmath>

#include "confdim/dimension.hpp"
#include "confdim/error.hpp"
#include "confdim/measures.hpp"

using namespace confdim;

namespace {

const double kCantorH = std::log(2.0) / std::log(3.0);

CylinderMeasure cantor_measure() {
  return conformal_cylinder_measure(system_from_family(cantor_family({1.0 / 3.0, 1.0 / 3.0}), 2), kCantorH, 8);
}

// Half a (1/4, 1/4) Cantor measure on [0,1], half Lebesgue on [1,2].
LineMeasure mixed_measure() {
  const SystemSpec s = system_from_family(cantor_family({0.25, 0.25}), 2);
  const LineMeasure cantor = mass_distribution_sequence(s, 0.5, 12);
  return cantor.transformed(1.0, 0.0, 0.5) + LineMeasure::uniform(1.0, 2.0).transformed(1.0, 0.0, 0.5);
}

std::vector<double> ternary_radii(int lo, int hi) {
  std::vector<double> out;
  for (int k = hi; k >= lo; --k) out.push_back(std::pow(3.0, -k));
  return out;
}

}  // namespace

TEST(Correlation, TwoPointIntegral) {
  const std::vector<double> pts = {0.0, 0.5};
  EXPECT_EQ(correlation_integral(pts, 0.6), 1.0);
  EXPECT_EQ(correlation_integral(pts, 0.4), 0.5);
  EXPECT_EQ(correlation_integral(pts, 0.5), 1.0);
}

TEST(Correlation, UniformSlope) {
  const CorrelationCurve c = correlation_curve(sample(LineMeasure::uniform(0.0, 1.0), 10000, 11), {1e-3, 1e-1, 20});
  EXPECT_NEAR(c.slope, 1.0, 0.05);
  EXPECT_FALSE(c.degenerate);
  EXPECT_GE(c.fit_points, 3u);
  for (std::size_t i = 1; i < c.values.size(); ++i) EXPECT_GE(c.values[i], c.values[i - 1]);
  for (double v : c.values) {
    EXPECT_GE(v, 1.0 / 10000.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Correlation, CantorSlope) {
  const CorrelationCurve c = correlation_curve(sample(cantor_measure(), 10000, 5), {std::pow(3.0, -10), std::pow(3.0, -3), 22},
                                               Interval{std::pow(3.0, -10), std::pow(3.0, -3)});
  EXPECT_NEAR(c.slope, kCantorH, 0.03);
}

TEST(Correlation, Errors) {
  EXPECT_THROW(correlation_curve(sample(LineMeasure::uniform(0.0, 1.0), 50, 1), {}), Error);
  EXPECT_THROW(correlation_curve(sample(LineMeasure::uniform(0.0, 1.0), 500, 1), {0.1, 0.01, 10}), Error);
  const CorrelationCurve d = correlation_curve(sample(LineMeasure::dirac(0.3), 200, 1), {});
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(d.slope, 0.0);
}

TEST(Density, DyadicRadii) {
  const auto r = dyadic_radii(0.1, 1.0);
  EXPECT_EQ(r, (std::vector<double>{1.0, 0.5, 0.25, 0.125}));
  EXPECT_THROW(dyadic_radii(1.0, 0.5), Error);
}

TEST(Density, LebesgueInterior) {
  const SampleCloud c{{0.5, 0.25}, 0};
  const DensityField f = density_field(ball_mass(LineMeasure::uniform(0.0, 1.0)), c, dyadic_radii(1e-4, 0.0625));
  EXPECT_EQ(f.supported(), 2u);
  // m(B(x, r)) = 2r, so the exponent is 1 + log 2 / log r.
  const double r_max = 0.0625, r_min = 0.0625 / 512.0;
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(f.lower[i], 1.0 + std::log(2.0) / std::log(r_max), 1e-14);
    EXPECT_NEAR(f.upper[i], 1.0 + std::log(2.0) / std::log(r_min), 1e-14);
  }
}

TEST(Density, DiracIsZero) {
  const DensityField f = density_field(ball_mass(LineMeasure::dirac(0.0)), SampleCloud{{0.0}, 0}, dyadic_radii(1e-6, 0.1));
  EXPECT_EQ(f.lower[0], 0.0);
  EXPECT_EQ(f.upper[0], 0.0);
}

TEST(Density, CantorTernaryRadiiAreExact) {
  const CylinderMeasure m = cantor_measure();
  const SampleCloud c = sample(m, 200, 17);
  const DensityField f = density_field(ball_mass(m), c, ternary_radii(4, 7));
  const YoungResult y = young_criterion(f, 0.05);
  EXPECT_NEAR(y.c, kCantorH, 0.05);
  EXPECT_GT(y.fraction, 0.9);
}

TEST(Young, LebesgueAndMixture) {
  const LineMeasure leb = LineMeasure::uniform(0.0, 1.0);
  const DensityField f = density_field(ball_mass(leb), sample(leb, 500, 2), dyadic_radii(1e-12, 1e-6));
  const YoungResult y = young_criterion(f, 0.05);
  EXPECT_NEAR(y.c, 1.0, 0.05);
  EXPECT_EQ(y.fraction, 1.0);

  const LineMeasure mix = mixed_measure();
  const DensityField g = density_field(ball_mass(mix), sample(mix, 1000, 3), dyadic_radii(1e-5, 0.0625));
  const YoungResult ym = young_criterion(g, 0.05);
  EXPECT_LT(ym.fraction, 0.75);
}

TEST(Eq15, Bounds) {
  const LineMeasure leb = LineMeasure::uniform(0.0, 1.0);
  const DensityBounds b = eq15_bounds(density_field(ball_mass(leb), sample(leb, 500, 4), dyadic_radii(1e-12, 1e-6)));
  EXPECT_NEAR(b.gamma_lower, 1.0, 0.06);
  EXPECT_NEAR(b.gamma_upper, 1.0, 0.06);

  const LineMeasure mix = mixed_measure();
  const DensityBounds m = eq15_bounds(density_field(ball_mass(mix), sample(mix, 2000, 5), dyadic_radii(1e-6, 1e-2)));
  EXPECT_NEAR(m.gamma_lower, 0.5, 0.1);
  EXPECT_NEAR(m.gamma_upper, 1.0, 0.1);
  EXPECT_LE(m.gamma_lower, m.gamma_upper);

  const DensityBounds d = eq15_bounds(density_field(ball_mass(LineMeasure::dirac(0.0)), sample(LineMeasure::dirac(0.0), 10, 1),
                                                    dyadic_radii(1e-3, 0.1)));
  EXPECT_EQ(d.gamma_lower, 0.0);
  EXPECT_EQ(d.gamma_upper, 0.0);
}

TEST(Flatness, SquareExponentLadder) {
  const double a = 0.5;
  const LineMeasure nu = gallery_limit("exm3.7", a).measure;
  std::vector<double> radii;
  for (int n = 2; n <= 20; ++n) radii.push_back(std::pow(a, n * n));
  const FlatnessCurve c = flatness_detector(nu, radii);
  ASSERT_EQ(c.exponents.size(), radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) EXPECT_LE(c.exponents[i], 2.0 / (i + 2.0) + 0.01) << radii[i];
  EXPECT_TRUE(c.fires);
}

TEST(Flatness, LebesgueDoesNotFire) {
  const FlatnessCurve c = flatness_detector(LineMeasure::uniform(0.0, 1.0), dyadic_radii(1e-8, 0.1));
  EXPECT_FALSE(c.fires);
  for (double e : c.exponents) EXPECT_GT(e, 0.9);
}

TEST(Flatness, DiracFires) {
  const FlatnessCurve c = flatness_detector(LineMeasure::dirac(0.0), dyadic_radii(1e-8, 0.1));
  EXPECT_TRUE(c.fires);
  for (double e : c.exponents) EXPECT_EQ(e, 0.0);
}

TEST(Flatness, MinBallMass) {
  const LineMeasure leb = LineMeasure::uniform(0.0, 1.0);
  // The worst centre in [0, 1/2] is the endpoint 0.
  EXPECT_NEAR(min_ball_mass(leb, 0.5, 0.1), 0.1, 1e-15);
  EXPECT_NEAR(min_ball_mass(LineMeasure::dirac(0.0), 0.5, 0.1), 0.0, 0.0);
}
