#include <gtest/gtest.h>

#include <cmath>

#include "confdim/error.hpp"
#include "confdim/pressure.hpp"
#include "confdim/transfer.hpp"
#include "oracle_values.hpp"

using namespace confdim;

namespace {

SystemSpec pair(double a, double b) {
  return make_system("pair", Flavor::Cifs, {{0.0, 1.0}},
                     {MapDescriptor::similitude(a, 0.0), MapDescriptor::similitude(b, 1.0 - b)}, std::nullopt);
}

SystemSpec fibonacci() {
  return make_system("fib", Flavor::Gdms, {{0.0, 1.0}},
                     {MapDescriptor::similitude(1.0 / 3.0, 0.0), MapDescriptor::similitude(1.0 / 3.0, 2.0 / 3.0)},
                     IncidenceMatrix({{1, 1}, {1, 0}}));
}

}  // namespace

TEST(Operator, CountingOnFullShift) {
  const OperatorMatrix m = build_operator(pair(1.0 / 3.0, 1.0 / 3.0), PotentialSpec::geometric(0.0), 2);
  ASSERT_EQ(m.size(), 4u);
  EXPECT_EQ(m.entries.size(), 8u);
  for (const auto& e : m.entries) EXPECT_EQ(e.weight, 1.0);
  EXPECT_EQ(m.apply(std::vector<double>(4, 1.0)), std::vector<double>(4, 2.0));
  EXPECT_EQ(m.apply_transpose(std::vector<double>(4, 1.0)), std::vector<double>(4, 2.0));
  EXPECT_NEAR(eigenmeasure(m).eigenvalue, 2.0, 1e-13);
}

TEST(Operator, Errors) {
  EXPECT_THROW(build_operator(pair(0.25, 0.25), PotentialSpec::geometric(0.5), 0), Error);
  EXPECT_THROW(build_operator(pair(0.25, 0.25), PotentialSpec::geometric(-1.0), 1), Error);
  const SystemSpec reducible = make_system(
      "red", Flavor::Gdms, {{0.0, 1.0}}, {MapDescriptor::similitude(0.25, 0.0), MapDescriptor::similitude(0.25, 0.75)},
      IncidenceMatrix({{1, 0}, {0, 1}}));
  try {
    build_operator(reducible, PotentialSpec::geometric(0.5), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Reducible);
  }
}

TEST(Operator, SummabilityAndVariation) {
  EXPECT_NEAR(summability_bound(pair(0.2, 0.4), PotentialSpec::geometric(1.0)), 0.6, 1e-15);
  EXPECT_EQ(potential_variation(pair(0.2, 0.4), PotentialSpec::geometric(1.0), 2), 0.0);
  const SystemSpec cf = system_from_family(continued_fraction_family(), 3);
  const double v2 = potential_variation(cf, PotentialSpec::geometric(0.7), 2);
  const double v4 = potential_variation(cf, PotentialSpec::geometric(0.7), 4);
  EXPECT_GT(v2, 0.0);
  EXPECT_LT(v4, v2);
}

TEST(Gibbs, CantorRootHasEigenvalueOne) {
  const double h = std::log(2.0) / std::log(3.0);
  const SystemSpec s = pair(1.0 / 3.0, 1.0 / 3.0);
  const GibbsState g = eigenmeasure(build_operator(s, PotentialSpec::geometric(h), 3));
  EXPECT_NEAR(g.eigenvalue, 1.0, 1e-13);
  for (double mu : g.eigenmeasure) EXPECT_NEAR(mu, 1.0 / 8.0, 1e-13);
  const EntropyLyapunov el = entropy_lyapunov(g, s, PotentialSpec::geometric(h));
  EXPECT_NEAR(el.entropy, std::log(2.0), 1e-12);
  EXPECT_NEAR(el.lyapunov, std::log(3.0), 1e-12);
  EXPECT_NEAR(el.ratio, h, 1e-12);
}

TEST(Gibbs, FibonacciPerronRoot) {
  const GibbsState g = eigenmeasure(build_operator(fibonacci(), PotentialSpec::geometric(0.0), 1));
  EXPECT_NEAR(g.eigenvalue, oracle::kGoldenRatio, 1e-12);
  ASSERT_EQ(g.density.size(), 2u);
  EXPECT_NEAR(g.density[0] / g.density[1], oracle::kGoldenRatio, 1e-12);
  EXPECT_NEAR(g.eigenmeasure[0] / g.eigenmeasure[1], oracle::kGoldenRatio, 1e-12);
  // Depth does not change the spectral radius.
  EXPECT_NEAR(eigenmeasure(build_operator(fibonacci(), PotentialSpec::geometric(0.0), 4)).eigenvalue,
              oracle::kGoldenRatio, 1e-12);
}

TEST(Gibbs, BernoulliEntropyOffTheRoot) {
  const SystemSpec s = pair(0.2, 0.4);
  const PotentialSpec f = PotentialSpec::geometric(1.0);
  const GibbsState g = eigenmeasure(build_operator(s, f, 2));
  EXPECT_NEAR(g.eigenvalue, 0.6, 1e-13);
  const EntropyLyapunov el = entropy_lyapunov(g, s, f);
  EXPECT_NEAR(el.entropy, oracle::kBernoulliEntropy, 1e-12);
  EXPECT_NEAR(el.lyapunov, oracle::kBernoulliLyapunov, 1e-12);
  EXPECT_NEAR(el.ratio, oracle::kBernoulliRatio, 1e-12);
}

TEST(Gibbs, GoldenTruncationsAtTheirRoots) {
  const auto fam = golden_family();
  for (std::size_t n = 2; n <= 6; ++n) {
    const SystemSpec s = system_from_family(fam, n);
    const double hn = oracle::kGoldenH[n];
    const PotentialSpec f = PotentialSpec::geometric(hn);
    const GibbsState g = eigenmeasure(build_operator(s, f, 2));
    EXPECT_NEAR(g.eigenvalue, 1.0, 1e-12) << n;
    EXPECT_NEAR(entropy_lyapunov(g, s, f).ratio, hn, 1e-6) << n;

    // The eigenmeasure is the conformal measure.
    const CylinderMeasure conformal = conformal_cylinder_measure(s, hn, 2);
    for (std::size_t i = 0; i < g.states.size(); ++i)
      EXPECT_NEAR(g.eigenmeasure[i], conformal.mass(g.states[i]), 1e-12) << g.states[i].to_string();
  }
}

TEST(Gibbs, GoldenRatioApproachesLimit) {
  const SystemSpec s = system_from_family(golden_family(), 12);
  const double h12 = oracle::kGoldenH[12];
  const PotentialSpec f = PotentialSpec::geometric(h12);
  const GibbsState g = eigenmeasure(build_operator(s, f, 1));
  EXPECT_NEAR(entropy_lyapunov(g, s, f).ratio, oracle::kGoldenLimitH, 1e-2);
}

TEST(Gibbs, ResidualsAndInvariance) {
  const SystemSpec cf = system_from_family(continued_fraction_family(), 3);
  const PotentialSpec f = PotentialSpec::geometric(0.7);
  const GibbsState g = eigenmeasure(build_operator(cf, f, 3));
  EXPECT_LT(g.eigen_residual, 1e-12);
  EXPECT_LT(g.density_residual, 1e-12);
  EXPECT_LT(g.invariance_residual, 1e-12);
  double mu = 0.0, inv = 0.0;
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    mu += g.eigenmeasure[i];
    inv += g.invariant[i];
    EXPECT_GT(g.density[i], 0.0);
  }
  EXPECT_NEAR(mu, 1.0, 1e-13);
  EXPECT_NEAR(inv, 1.0, 1e-13);

  // Stationarity of the induced chain.
  std::vector<double> next(g.states.size(), 0.0);
  for (const auto& e : g.transitions) next[e.col] += g.invariant[e.row] * e.weight;
  for (std::size_t i = 0; i < next.size(); ++i) EXPECT_NEAR(next[i], g.invariant[i], 1e-12);

  const CylinderMeasure star = invariant_measure(g, cf);
  EXPECT_LT(star.additivity_error(), 1e-12);
}

TEST(Gibbs, SpectralRadiusMatchesPressure) {
  const SystemSpec cf = system_from_family(continued_fraction_family(), 3);
  const double t = 0.7;
  const PotentialSpec f = PotentialSpec::geometric(t);
  const double log_lambda = std::log(eigenmeasure(build_operator(cf, f, 2)).eigenvalue);
  const SpectralPressure sp = spectral_pressure(cf, t);
  // The rank-2 operator sits within its potential variation of the true pressure.
  const double slack = potential_variation(cf, f, 2);
  EXPECT_GE(log_lambda, sp.lower - slack);
  EXPECT_LE(log_lambda, sp.upper + slack);
}
