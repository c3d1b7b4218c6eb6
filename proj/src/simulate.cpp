#include "subclonal/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "subclonal/assignment.hpp"
#include "subclonal/errors.hpp"

namespace subclonal {

namespace {

constexpr double kPhiShape = 600.0;
constexpr double kPhiRate = 3.0;
constexpr double kTrueP0 = 0.05;

const std::vector<std::vector<int>> kSim1Copies = {
    {3, 3, 2, 2, 0, 2, 3, 2, 2, 2},
    {2, 2, 3, 0, 2, 2, 3, 2, 2, 2},
};
const std::vector<std::vector<int>> kSim1Variants = {
    {1, 3, 1, 2, 0, 0, 2, 0, 1, 0},
    {0, 1, 3, 0, 1, 2, 1, 0, 1, 0},
};

const std::vector<std::vector<int>> kSim2Copies = {
    {3, 2, 2, 0, 2, 3, 2, 2, 2, 2},
    {2, 3, 2, 2, 0, 2, 2, 3, 2, 2},
    {2, 2, 1, 2, 2, 3, 2, 2, 0, 2},
    {2, 2, 1, 3, 2, 2, 0, 2, 2, 2},
};
const std::vector<std::vector<int>> kSim2Variants = {
    {2, 1, 0, 0, 1, 3, 0, 2, 0, 0},
    {1, 3, 0, 1, 0, 0, 2, 1, 0, 0},
    {0, 1, 1, 2, 0, 1, 1, 0, 0, 0},
    {1, 0, 0, 2, 2, 1, 0, 0, 1, 0},
};

Scenario finish(ScenarioTruth truth, Rng& rng) {
  truth.refresh();
  truth.validate(3);
  Scenario out;
  out.data = generate_custom(truth, rng);
  out.truth = std::move(truth);
  return out;
}

}  // namespace

void ScenarioTruth::refresh() {
  sample_copy = compute_M(copies, weights);
  vaf = RealMatrix(copies.rows(), weights.rows(), 0.0);
  for (std::size_t s = 0; s < copies.rows(); ++s) {
    for (std::size_t t = 0; t < weights.rows(); ++t) {
      if (sample_copy(s, t) <= kMinSampleCopyNumber) continue;
      double num = p0 * kBackgroundVariants * weights(t, 0);
      for (std::size_t c = 0; c < copies.cols(); ++c) num += weights(t, c + 1) * variants(s, c);
      vaf(s, t) = num / sample_copy(s, t);
    }
  }
}

void ScenarioTruth::validate(int max_copy) const {
  if (variants.rows() != copies.rows() || variants.cols() != copies.cols())
    throw StructuralError("truth: L and Z shapes differ");
  if (weights.cols() != copies.cols() + 1 || phi.size() != weights.rows())
    throw StructuralError("truth: weight or phi shape mismatch");
  for (std::size_t i = 0; i < copies.size(); ++i) {
    const int l = copies.values()[i], z = variants.values()[i];
    if (l < 0 || l > max_copy || z < 0 || z > l) throw StructuralError("truth: copy/variant out of range");
  }
  for (std::size_t t = 0; t < weights.rows(); ++t) {
    double sum = 0.0;
    for (double w : weights.row(t)) {
      if (w < 0.0) throw StructuralError("truth: negative weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw StructuralError("truth: weights do not sum to one");
  }
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw StructuralError("truth: p0 outside [0, 1]");
}

IntMatrix block_matrix(const std::vector<std::vector<int>>& blocks, std::size_t loci) {
  IntMatrix out(loci, blocks.size());
  for (std::size_t c = 0; c < blocks.size(); ++c)
    for (std::size_t s = 0; s < loci; ++s) out(s, c) = blocks[c][s * blocks[c].size() / loci];
  return out;
}

Scenario generate_sim1(Rng& rng) {
  constexpr std::size_t S = 100, T = 4;
  ScenarioTruth truth;
  truth.copies = block_matrix(kSim1Copies, S);
  truth.variants = block_matrix(kSim1Variants, S);
  truth.p0 = kTrueP0;
  truth.phi.resize(T);
  for (double& phi : truth.phi) phi = rng.gamma(kPhiShape, kPhiRate);
  const std::array<double, 3> alpha = {0.4, 30.0, 10.0};
  truth.weights = RealMatrix(T, alpha.size());
  for (std::size_t t = 0; t < T; ++t) rng.dirichlet(alpha, truth.weights.row(t));
  return finish(std::move(truth), rng);
}

Scenario generate_sim2(Rng& rng, std::size_t loci, std::size_t samples) {
  ScenarioTruth truth;
  truth.copies = block_matrix(kSim2Copies, loci);
  truth.variants = block_matrix(kSim2Variants, loci);
  truth.p0 = kTrueP0;
  truth.phi.resize(samples);
  for (double& phi : truth.phi) phi = rng.gamma(kPhiShape, kPhiRate);
  truth.weights = RealMatrix(samples, 5);
  for (std::size_t t = 0; t < samples; ++t) {
    std::array<double, 4> a = {13.0, 4.0, 2.0, 1.0};
    for (int i = 3; i > 0; --i) std::swap(a[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(rng.uniform_int(0, i))]);
    const std::array<double, 5> alpha = {0.3, a[0], a[1], a[2], a[3]};
    rng.dirichlet(alpha, truth.weights.row(t));
  }
  return finish(std::move(truth), rng);
}

Scenario generate_lung_like(Rng& rng) {
  constexpr std::size_t kLoci = 101, kSamples = 4;
  const std::array<int, 5> copy_draws = {1, 2, 2, 2, 3};
  std::vector<std::vector<int>> copies(3, std::vector<int>(10)), variants(3, std::vector<int>(10));
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t b = 0; b < 10; ++b) {
      copies[c][b] = copy_draws[static_cast<std::size_t>(rng.uniform_int(0, 4))];
      variants[c][b] = rng.uniform_int(0, copies[c][b]);
    }
  ScenarioTruth truth;
  truth.copies = block_matrix(copies, kLoci);
  truth.variants = block_matrix(variants, kLoci);
  truth.p0 = kTrueP0;
  truth.phi.resize(kSamples);
  for (double& phi : truth.phi) phi = rng.gamma(130.0, 2.0);
  truth.weights = RealMatrix(kSamples, 4);
  const std::array<double, 4> alpha = {0.5, 8.0, 4.0, 2.0};
  for (std::size_t t = 0; t < kSamples; ++t) rng.dirichlet(alpha, truth.weights.row(t));
  Scenario out = finish(std::move(truth), rng);
  out.data.locus_ids.clear();
  for (std::size_t s = 0; s < kLoci; ++s)
    out.data.locus_ids.push_back("chr" + std::to_string(1 + s * 22 / kLoci) + ":" + std::to_string(1000000 + 7919 * s));
  for (std::size_t t = 0; t < kSamples; ++t) out.data.sample_ids[t] = "T" + std::to_string(t + 1);
  return out;
}

ReadCountData generate_custom(const ScenarioTruth& truth, Rng& rng) {
  const std::size_t S = truth.copies.rows(), T = truth.weights.rows();
  RealMatrix total(S, T), variant(S, T);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t t = 0; t < T; ++t) {
      const double M = truth.sample_copy(s, t);
      const auto N = M > 0.0 ? rng.poisson(0.5 * truth.phi[t] * M) : 0;
      const auto n = M > kMinSampleCopyNumber ? rng.binomial(N, truth.vaf(s, t)) : 0;
      total(s, t) = static_cast<double>(N);
      variant(s, t) = static_cast<double>(n);
    }
  }
  return make_read_counts(std::move(total), std::move(variant));
}

std::vector<int> RecoveryReport::by_weight() const {
  std::vector<int> order(subclones.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return subclones[static_cast<std::size_t>(a)].mean_weight > subclones[static_cast<std::size_t>(b)].mean_weight;
  });
  return order;
}

RecoveryReport score_recovery(const PosteriorSummary& summary, const ScenarioTruth& truth) {
  const std::size_t S = truth.copies.rows(), T = truth.weights.rows();
  if (summary.L_star.rows() != S || summary.w_star.rows() != T)
    throw StructuralError("score_recovery: summary and truth dimensions differ");
  RecoveryReport report;
  report.C_true = truth.subclones();
  report.C_star = summary.C_star;
  report.C_correct = report.C_true == report.C_star;

  const auto Ct = static_cast<std::size_t>(report.C_true);
  const std::size_t Ce = summary.L_star.cols();
  const std::size_t n = std::max(Ct, Ce);
  const auto z_scale = static_cast<std::int64_t>(S * n * 3 + 1);
  Matrix<std::int64_t> cost(n, n, 0);  // padding rows/columns cost nothing
  for (std::size_t c = 0; c < Ct; ++c) {
    for (std::size_t k = 0; k < Ce; ++k) {
      std::int64_t dL = 0, dZ = 0;
      for (std::size_t s = 0; s < S; ++s) {
        dL += std::abs(truth.copies(s, c) - summary.L_star(s, k));
        dZ += std::abs(truth.variants(s, c) - summary.Z_star(s, k));
      }
      cost(c, k) = dL * z_scale + dZ;
    }
  }
  const auto match = solve_assignment_lexmin(cost);

  for (std::size_t c = 0; c < Ct; ++c) {
    SubcloneRecovery r;
    r.truth_column = static_cast<int>(c);
    for (std::size_t t = 0; t < T; ++t) r.mean_weight += truth.weights(t, c + 1);
    r.mean_weight /= static_cast<double>(T);
    const auto k = static_cast<std::size_t>(match.perm[c]);
    if (k < Ce) {
      r.estimate_column = static_cast<int>(k);
      std::size_t dl = 0, dz = 0;
      for (std::size_t s = 0; s < S; ++s) {
        dl += truth.copies(s, c) != summary.L_star(s, k);
        dz += truth.variants(s, c) != summary.Z_star(s, k);
      }
      r.L_mismatch = static_cast<double>(dl) / static_cast<double>(S);
      r.Z_mismatch = static_cast<double>(dz) / static_cast<double>(S);
      r.w_mae = 0.0;
      for (std::size_t t = 0; t < T; ++t) r.w_mae += std::abs(truth.weights(t, c + 1) - summary.w_star(t, k + 1));
      r.w_mae /= static_cast<double>(T);
    }
    report.subclones.push_back(r);
  }
  report.p0_relative_error = std::abs(summary.p0_star - truth.p0) / truth.p0;
  for (std::size_t t = 0; t < T; ++t)
    report.phi_relative_error += std::abs(summary.phi_star[t] - truth.phi[t]) / truth.phi[t];
  report.phi_relative_error /= static_cast<double>(T);
  return report;
}

}  // namespace subclonal
