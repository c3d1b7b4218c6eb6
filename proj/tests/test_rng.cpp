#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>

#include "subclonal/rng.hpp"

using namespace subclonal;

namespace {

template <typename Dist>
double ks_statistic(std::vector<double> xs, const Dist& dist) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = boost::math::cdf(dist, xs[i]);
    d = std::max({d, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
  }
  return d;
}

}  // namespace

TEST(SplitSeed, DeterministicAndDistinct) {
  EXPECT_EQ(split_seed(42, 0), split_seed(42, 0));
  EXPECT_NE(split_seed(42, 0), split_seed(42, 1));
  EXPECT_NE(split_seed(42, 0), split_seed(43, 0));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.uniform(), b.uniform());
}

TEST(Rng, UniformIsOpenInterval) {
  Rng rng(1);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Rng, GammaMatchesBoostCdf) {
  Rng rng(2);
  for (double shape : {0.3, 1.0, 600.0}) {
    std::vector<double> xs(20000);
    for (double& x : xs) x = rng.gamma(shape, 3.0);
    const boost::math::gamma_distribution<double> dist(shape, 1.0 / 3.0);
    EXPECT_LT(ks_statistic(xs, dist), 1.63 / std::sqrt(20000.0)) << "shape " << shape;
  }
}

TEST(Rng, LogGammaVariateFiniteForTinyShape) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) ASSERT_TRUE(std::isfinite(rng.log_gamma_variate(1e-3)));
}

TEST(Rng, BetaMatchesBoostCdf) {
  Rng rng(4);
  std::vector<double> xs(20000);
  for (double& x : xs) x = rng.beta(25.0, 975.0);
  EXPECT_LT(ks_statistic(xs, boost::math::beta_distribution<double>(25.0, 975.0)), 1.63 / std::sqrt(20000.0));
}

TEST(Rng, DirichletOnSimplexWithCorrectMean) {
  Rng rng(5);
  const std::vector<double> alpha = {0.4, 30.0, 10.0};
  std::vector<double> out(3), mean(3, 0.0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    rng.dirichlet(alpha, out);
    double s = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      ASSERT_GE(out[k], 0.0);
      s += out[k];
      mean[k] += out[k] / n;
    }
    ASSERT_NEAR(s, 1.0, 1e-12);
  }
  EXPECT_NEAR(mean[0], 0.4 / 40.4, 0.001);
  EXPECT_NEAR(mean[1], 30.0 / 40.4, 0.003);
}

TEST(Rng, CategoricalLogFrequencies) {
  Rng rng(6);
  const double ninf = -std::numeric_limits<double>::infinity();
  const std::vector<double> lw = {std::log(0.2), ninf, std::log(0.5), std::log(0.3)};
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[rng.categorical_log(lw)];
  EXPECT_EQ(counts[1], 0);
  for (std::size_t k : {0u, 2u, 3u}) {
    const double p = std::exp(lw[k]);
    EXPECT_NEAR(counts[k] / static_cast<double>(n), p, 4.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(Rng, PoissonAndBinomialMeans) {
  Rng rng(7);
  double ps = 0.0, bs = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    ps += static_cast<double>(rng.poisson(200.0));
    bs += static_cast<double>(rng.binomial(100, 0.3));
  }
  EXPECT_NEAR(ps / n, 200.0, 4.0 * std::sqrt(200.0 / n));
  EXPECT_NEAR(bs / n, 30.0, 4.0 * std::sqrt(21.0 / n));
  EXPECT_EQ(rng.poisson(0.0), 0);
}
