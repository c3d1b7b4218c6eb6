#pragma once

#include <cstddef>
#include <vector>

#include "subclonal/matrix.hpp"
#include "subclonal/model.hpp"
#include "subclonal/rng.hpp"
#include "subclonal/summary.hpp"

namespace subclonal {

struct ScenarioTruth {
  IntMatrix copies;    // L
  IntMatrix variants;  // Z
  RealMatrix weights;  // samples x (C + 1), background first
  std::vector<double> phi;
  double p0 = 0.05;
  RealMatrix sample_copy;  // M, derived
  RealMatrix vaf;          // p, derived; 0 where M vanishes

  int subclones() const noexcept { return static_cast<int>(copies.cols()); }
  /// Recomputes sample_copy and vaf.
  void refresh();
  void validate(int max_copy) const;
};

struct Scenario {
  ReadCountData data;
  ScenarioTruth truth;
};

/// Expands a layout of 10 equal locus blocks: column c of the result takes
/// blocks[c][s * 10 / loci] at locus s.
IntMatrix block_matrix(const std::vector<std::vector<int>>& blocks, std::size_t loci);

/// S = 100, T = 4, C = 2; phi_t ~ Gamma(600, 3), w_t ~ Dir(0.4, 30, 10), p0 = 0.05.
Scenario generate_sim1(Rng& rng);

/// C = 4; phi_t ~ Gamma(600, 3), w_t ~ Dir(0.3, a_t) with a_t an independent
/// random permutation of (13, 4, 2, 1) for every sample, p0 = 0.05.
Scenario generate_sim2(Rng& rng, std::size_t loci = 100, std::size_t samples = 25);

/// Synthetic data in the layout of a four-sample exome panel: S = 101 loci
/// with chr:pos ids, T = 4, about 65x coverage, C = 3 random block profiles.
Scenario generate_lung_like(Rng& rng);

/// N_st ~ Poi(phi_t M_st / 2), n_st ~ Bin(N_st, p_st); n = 0 where M_st = 0.
ReadCountData generate_custom(const ScenarioTruth& truth, Rng& rng);

struct SubcloneRecovery {
  int truth_column = 0;
  int estimate_column = -1;  // -1 when left unmatched
  double mean_weight = 0.0;  // true weight averaged over samples
  double L_mismatch = 1.0;   // fraction of loci
  double Z_mismatch = 1.0;
  double w_mae = 1.0;
};

struct RecoveryReport {
  int C_star = 0;
  int C_true = 0;
  bool C_correct = false;
  std::vector<SubcloneRecovery> subclones;  // one per true subclone
  double p0_relative_error = 0.0;
  double phi_relative_error = 0.0;  // mean over samples

  /// True subclone indices by descending mean weight.
  std::vector<int> by_weight() const;
};

/// Columns are matched on L (then Z) distance; with C* != C_true only
/// min(C*, C_true) pairs are formed.
RecoveryReport score_recovery(const PosteriorSummary& summary, const ScenarioTruth& truth);

}  // namespace subclonal
