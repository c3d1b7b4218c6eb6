#include <gtest/gtest.h>

#include <cmath>

#include "subclonal/errors.hpp"
#include "subclonal/mcmc.hpp"
#include "subclonal/priors.hpp"
#include "subclonal/simulate.hpp"
#include "support.hpp"

using namespace subclonal;
using namespace subclonal::testing;

namespace {

ReadCountData tiny_data(std::size_t S, std::size_t T, Rng& rng) {
  RealMatrix N(S, T), n(S, T);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t t = 0; t < T; ++t) {
      N(s, t) = static_cast<double>(rng.uniform_int(5, 40));
      n(s, t) = static_cast<double>(rng.uniform_int(0, static_cast<int>(N(s, t))));
    }
  return make_read_counts(N, n);
}

Hyperparameters tiny_hyper(const ReadCountData& data, int Q) {
  Hyperparameters h = default_hyperparameters(data, Q);
  set_phi_prior(h, data.samples(), 30.0, 1.0);
  return h;
}

ChainConfig quiet_config() {
  ChainConfig cfg;
  cfg.starts = 1;
  return cfg;
}

}  // namespace

TEST(Conditionals, CopyVariantAndPairMatchEnumeration) {
  Rng rng(21);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t S = 1 + rep % 2, T = 1 + (rep / 2) % 2;
    const int Q = 2 + rep % 2;
    const ReadCountData data = tiny_data(S, T, rng);
    const Hyperparameters h = tiny_hyper(data, Q);
    ModelState x = initial_state(data, h, 1, rng);
    for (std::size_t s = 0; s < S; ++s) {
      x.copies(s, 0) = rng.uniform_int(0, Q);
      x.variants(s, 0) = rng.uniform_int(0, x.copies(s, 0));
    }
    const FixedCSampler sampler(data, h, x, quiet_config());
    for (std::size_t s = 0; s < S; ++s) {
      EXPECT_LT(total_variation(sampler.copy_conditional(s, 0), brute_copy_conditional(x, data, h, s, 0)), 1e-10);
      EXPECT_LT(total_variation(sampler.variant_conditional(s, 0), brute_variant_conditional(x, data, h, s, 0)),
                1e-10);
      EXPECT_LT(total_variation(sampler.pair_conditional(s, 0), brute_pair_conditional(x, data, h, s, 0)), 1e-10);
    }
  }
}

TEST(Conditionals, CopySupportRespectsVariants) {
  Rng rng(22);
  const ReadCountData data = tiny_data(1, 1, rng);
  const Hyperparameters h = tiny_hyper(data, 3);
  ModelState x = initial_state(data, h, 1, rng);
  x.copies(0, 0) = 2;
  x.variants(0, 0) = 2;
  const FixedCSampler sampler(data, h, x, quiet_config());
  const auto pmf = sampler.copy_conditional(0, 0);
  EXPECT_EQ(pmf[0], 0.0);
  EXPECT_EQ(pmf[1], 0.0);
  EXPECT_GT(pmf[2] + pmf[3], 0.999999);
}

TEST(Conditionals, FlatDataGivesPriorOverCopies) {
  RealMatrix N(1, 1, 0.0), n(1, 1, 0.0);
  ReadCountData data = make_read_counts(N, n);
  data.exposure = RealMatrix(1, 1, 0.0);
  Hyperparameters h = default_hyperparameters(data);
  set_phi_prior(h, 1, 2.0, 1.0);
  Rng rng(23);
  ModelState x = initial_state(data, h, 1, rng);
  x.variants(0, 0) = 0;
  for (std::size_t q = 0; q < 4; ++q) x.pi(0, q) = 0.25;
  x.p0 = 0.0 + 1e-9;
  const FixedCSampler sampler(data, h, x, quiet_config());
  const auto pmf = sampler.copy_conditional(0, 0);
  const double z = 1.0 + 1.0 / 2 + 1.0 / 3 + 1.0 / 4;
  for (int q = 0; q < 4; ++q) EXPECT_NEAR(pmf[static_cast<std::size_t>(q)], 1.0 / (q + 1) / z, 1e-12);
}

TEST(Conditionals, NoVariantReadsFavourZeroVariants) {
  RealMatrix N(1, 2, 50.0), n(1, 2, 0.0);
  const ReadCountData data = make_read_counts(N, n);
  const Hyperparameters h = default_hyperparameters(data);
  Rng rng(24);
  ModelState x = initial_state(data, h, 2, rng);
  x.copies(0, 0) = 3;
  x.variants(0, 1) = 0;
  x.p0 = 1e-6;
  const FixedCSampler sampler(data, h, x, quiet_config());
  const auto pmf = sampler.variant_conditional(0, 0);
  EXPECT_EQ(std::max_element(pmf.begin(), pmf.end()) - pmf.begin(), 0);
}

TEST(Conditionals, PhiMatchesConjugatePosterior) {
  Rng rng(25);
  const ReadCountData data = tiny_data(2, 2, rng);
  const Hyperparameters h = tiny_hyper(data, 3);
  const ModelState x = initial_state(data, h, 2, rng);
  const FixedCSampler sampler(data, h, x, quiet_config());
  const auto M = compute_M(x.copies, x.weights);
  const auto params = sampler.phi_conditional();
  for (std::size_t t = 0; t < 2; ++t) {
    EXPECT_DOUBLE_EQ(params[t].shape, h.phi_shape[t] + data.total(0, t) + data.total(1, t));
    EXPECT_NEAR(params[t].rate, h.phi_rate[t] + (M(0, t) + M(1, t)) / 2, 1e-14);
  }
}

TEST(Conditionals, PiUsesCopyCountsAndConjugateMean) {
  Rng rng(26);
  const ReadCountData data = tiny_data(6, 1, rng);
  const Hyperparameters h = tiny_hyper(data, 3);
  ModelState x = initial_state(data, h, 1, rng);
  const int copies[] = {2, 2, 0, 3, 2, 1};
  for (std::size_t s = 0; s < 6; ++s) {
    x.copies(s, 0) = copies[s];
    x.variants(s, 0) = 0;
  }
  FixedCSampler sampler(data, h, x, quiet_config());
  EXPECT_EQ(sampler.copy_counts(0), (std::vector<int>{1, 1, 3, 1}));
  const auto params = beta_dirichlet_params(h, 1);
  double mean = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    sampler.update_pi(rng);
    mean += 1.0 - sampler.state().pi(0, 2);
  }
  const double a = params.a + 3, b = params.b + 3;
  EXPECT_NEAR(mean / n, a / (a + b), 4 * std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1)) / n));
}

TEST(Kernels, ZeroStepsFreezeThetaAndP0) {
  Rng rng(27);
  const ReadCountData data = tiny_data(3, 2, rng);
  const Hyperparameters h = tiny_hyper(data, 3);
  ChainConfig cfg = quiet_config();
  cfg.theta_step = 0.0;
  cfg.p0_step = 0.0;
  const ModelState x = initial_state(data, h, 2, rng);
  FixedCSampler sampler(data, h, x, cfg);
  for (int i = 0; i < 20; ++i) {
    sampler.update_theta(rng);
    sampler.update_p0(rng);
  }
  EXPECT_EQ(sampler.state().theta, x.theta);
  EXPECT_EQ(sampler.state().p0, x.p0);
}

TEST(Kernels, P0PulledBelowPriorMeanWithoutVariantReads) {
  RealMatrix N(10, 2, 200.0), n(10, 2, 0.0);
  const ReadCountData data = make_read_counts(N, n);
  const Hyperparameters h = default_hyperparameters(data);
  Rng rng(28);
  ModelState x = initial_state(data, h, 1, rng);
  for (std::size_t s = 0; s < 10; ++s) {
    x.copies(s, 0) = 2;
    x.variants(s, 0) = 0;
  }
  for (std::size_t t = 0; t < 2; ++t) {
    x.theta(t, 0) = 1.0;
    x.theta(t, 1) = 1.0;
  }
  x.refresh_weights();
  FixedCSampler sampler(data, h, x, quiet_config());
  double mean = 0.0;
  for (int i = 0; i < 5000; ++i) {
    sampler.update_p0(rng);
    mean += sampler.state().p0 / 5000;
  }
  EXPECT_LT(mean, 0.3 / 5.3);
}

TEST(Kernels, StatesStayValidAndFinite) {
  Rng rng(29);
  const ReadCountData data = tiny_data(8, 3, rng);
  const Hyperparameters h = tiny_hyper(data, 3);
  FixedCSampler sampler(data, h, initial_state(data, h, 3, rng), quiet_config());
  for (int i = 0; i < 300; ++i) {
    sampler.sweep(rng);
    ASSERT_NO_THROW(sampler.state().validate(3));
    ASSERT_TRUE(std::isfinite(sampler.log_joint()));
  }
}

TEST(RunFixedC, SameSeedSameTrace) {
  Rng g(30);
  const ReadCountData data = tiny_data(6, 2, g);
  const Hyperparameters h = tiny_hyper(data, 3);
  ChainConfig cfg;
  cfg.iterations = 200;
  cfg.burn_in = 50;
  Rng a(5), b(5);
  const auto ta = run_fixed_C(data, h, 2, cfg, a);
  const auto tb = run_fixed_C(data, h, 2, cfg, b);
  ASSERT_EQ(ta.log_joint, tb.log_joint);
  ASSERT_EQ(ta.samples.size(), 150u);
  for (std::size_t i = 0; i < ta.samples.size(); ++i) {
    ASSERT_EQ(ta.samples[i].copies, tb.samples[i].copies);
    ASSERT_EQ(ta.samples[i].theta, tb.samples[i].theta);
  }
}

TEST(RunFixedC, ConfigValidation) {
  ChainConfig cfg;
  cfg.burn_in = cfg.iterations;
  EXPECT_THROW(cfg.validate(), StructuralError);
  cfg = ChainConfig{};
  cfg.thin = 0;
  EXPECT_THROW(cfg.validate(), StructuralError);
}

TEST(RunFixedC, Sim1FitsTrueVaf) {
  Rng g(7);
  const Scenario sc = generate_sim1(g);
  const Hyperparameters h = default_hyperparameters(sc.data);
  ChainConfig cfg;
  cfg.iterations = 2500;
  cfg.burn_in = 1000;
  Rng rng(8);
  const auto trace = run_fixed_C(sc.data, h, 2, cfg, rng);
  RealMatrix mean(100, 4, 0.0);
  for (const auto& x : trace.samples) {
    const auto p = compute_p(x.copies, x.variants, x.weights, x.p0);
    for (std::size_t i = 0; i < p.size(); ++i) mean.values()[i] += p.values()[i] / trace.samples.size();
  }
  std::size_t close = 0;
  for (std::size_t i = 0; i < mean.size(); ++i) close += std::abs(mean.values()[i] - sc.truth.vaf.values()[i]) <= 0.05;
  EXPECT_GE(close, static_cast<std::size_t>(0.9 * 400));
  const double rate = static_cast<double>(trace.acceptance.theta_accepted) / trace.acceptance.theta_proposed;
  EXPECT_GT(rate, 0.1);
  EXPECT_LT(rate, 0.7);
}

TEST(RunFixedC, GettingItRight) {
  // Successive-conditional simulator: alternate data ~ p(data | x) and one
  // sweep x ~ K(x | data); the x-marginal must stay at the prior.
  Rng rng(31);
  const std::size_t S = 3, T = 2;
  RealMatrix zero(S, T, 0.0);
  ReadCountData shape_only = make_read_counts(zero, zero);
  Hyperparameters h = default_hyperparameters(shape_only);
  set_phi_prior(h, T, 20.0, 1.0);
  ChainConfig cfg = quiet_config();
  ModelState x = initial_state(shape_only, h, 2, rng);
  std::vector<double> pi2, phi, p0, w0;
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    ScenarioTruth truth{x.copies, x.variants, x.weights, x.phi, x.p0, {}, {}};
    truth.refresh();
    const ReadCountData data = generate_custom(truth, rng);
    FixedCSampler sampler(data, h, x, cfg);
    sampler.sweep(rng);
    x = sampler.state();
    pi2.push_back(x.pi(0, 2));
    phi.push_back(x.phi[0]);
    p0.push_back(x.p0);
    w0.push_back(x.weights(0, 0));
  }
  const double a = h.alpha / 2, b = h.beta;
  const auto m_pi = batch_means(pi2), m_phi = batch_means(phi), m_p0 = batch_means(p0), m_w0 = batch_means(w0);
  EXPECT_NEAR(m_pi.mean, b / (a + b), 4 * m_pi.se);
  EXPECT_NEAR(m_phi.mean, 20.0, 4 * m_phi.se);
  EXPECT_NEAR(m_p0.mean, 0.3 / 5.3, 4 * m_p0.se);
  EXPECT_NEAR(m_w0.mean, h.d0 / (h.d0 + 2 * h.d), 4 * m_w0.se);
}
