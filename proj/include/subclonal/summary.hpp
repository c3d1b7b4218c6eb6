#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "subclonal/matrix.hpp"
#include "subclonal/mcmc.hpp"
#include "subclonal/model.hpp"

namespace subclonal {

struct MatrixDistance {
  std::int64_t distance = 0;
  std::vector<int> perm;  // column perm[c] of b is matched to column c of a
};

/// min over column permutations sigma of sum_c sum_s |a(s,c) - b(s,sigma_c)|,
/// with the lexicographically smallest minimizing permutation.
MatrixDistance matrix_distance(const IntMatrix& a, const IntMatrix& b);

/// Most frequent C among the retained samples, ties toward the smaller C.
int map_C(const ChainTrace& trace);
int map_C(std::span<const int> subclones);

/// (C, relative frequency) over the retained samples, ascending in C.
std::vector<std::pair<int, double>> C_posterior(const ChainTrace& trace);

struct LEstimate {
  IntMatrix copies;                    // L*
  std::size_t medoid = 0;              // index into trace.samples
  std::vector<std::size_t> members;    // samples with C = C*
  std::vector<std::vector<int>> perm;  // per member: member column aligned to L* column c
};

struct SummaryOptions {
  /// The medoid search runs over at most this many evenly spaced samples.
  std::size_t max_medoid_candidates = 500;
};

LEstimate point_estimate_L(const ChainTrace& trace, int C_star, const SummaryOptions& options = {});

struct ConditionalEstimates {
  IntMatrix variants;  // Z*
  RealMatrix weights;  // w*, samples x (C* + 1)
  RealMatrix pi;       // pi*, C* x (Q + 1)
};

ConditionalEstimates conditional_estimates(const ChainTrace& trace, const LEstimate& L_star,
                                           int max_copy);

struct ScalarEstimates {
  std::vector<double> phi;
  double p0 = 0.0;
};

ScalarEstimates scalar_estimates(const ChainTrace& trace, int C_star);

struct PosteriorSummary {
  int C_star = 0;
  std::vector<std::pair<int, double>> C_posterior;
  IntMatrix L_star;
  IntMatrix Z_star;
  RealMatrix w_star;
  RealMatrix pi_star;
  std::vector<double> phi_star;
  double p0_star = 0.0;
  RealMatrix fitted_M;
  RealMatrix fitted_p;
  RealMatrix residual_M;
  RealMatrix residual_p;
};

/// Optional true sample copy numbers for residual_M; without them M is
/// compared with the empirical 2 N_st / phi*_t. residual_p is always taken
/// against n_st / N_st (NaN where N_st = 0).
struct ResidualReference {
  const RealMatrix* sample_copy = nullptr;
};

void fit_residuals(PosteriorSummary& summary, const ReadCountData& data,
                   const ResidualReference& reference = {});

/// Full summary. Columns of L*, Z*, w*, pi* are put in a canonical order:
/// descending mean weight, then the L* column, then the Z* column.
PosteriorSummary summarize(const ChainTrace& trace, const ReadCountData& data, int max_copy,
                           const SummaryOptions& options = {},
                           const ResidualReference& reference = {});

}  // namespace subclonal
