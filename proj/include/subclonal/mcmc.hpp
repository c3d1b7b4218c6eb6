#pragma once

#include <cstdint>
#include <vector>

#include "subclonal/matrix.hpp"
#include "subclonal/model.hpp"
#include "subclonal/rng.hpp"

namespace subclonal {

struct ChainConfig {
  int iterations = 16000;
  int burn_in = 6000;
  int thin = 1;
  std::uint64_t seed = 1;
  double theta_step = 0.2;  // sd of the log-scale random walk
  double p0_step = 0.2;     // sd of the logit-scale random walk
  double row_update_prob = 0.5;
  /// Tune the two step sizes toward 0.3 acceptance; burn-in only.
  bool adapt_during_burn_in = true;
  /// Extra blocked Gibbs step on each (l_sc, z_sc) pair.
  bool pair_updates = true;
  /// Per-sample MH swap of two subclone weights.
  bool weight_swaps = true;
  /// Independent pilot chains tried before the run; the one ending with the
  /// highest log joint seeds the chain.
  int starts = 8;
  int pilot_sweeps = 100;

  void validate() const;
};

struct AcceptanceCounts {
  std::uint64_t theta_proposed = 0;
  std::uint64_t theta_accepted = 0;
  std::uint64_t p0_proposed = 0;
  std::uint64_t p0_accepted = 0;
  std::uint64_t row_proposed = 0;
  std::uint64_t row_accepted = 0;
  std::uint64_t swap_proposed = 0;
  std::uint64_t swap_accepted = 0;
  std::uint64_t dimension_proposed = 0;
  std::uint64_t dimension_accepted = 0;

  AcceptanceCounts& operator+=(const AcceptanceCounts& other);
};

struct ChainTrace {
  std::vector<ModelState> samples;  // retained after burn-in and thinning
  std::vector<double> sample_log_joint;
  std::vector<int> subclones;     // C at every iteration
  std::vector<double> log_joint;  // at every iteration
  AcceptanceCounts acceptance;
};

/// Data-driven starting point: z_sc = clamp(round(2 median_t n_st/N_st), 0, Q)
/// and l_sc = max(2, z_sc) in every column; pi, theta, phi and p0 are prior
/// draws.
ModelState initial_state(const ReadCountData& data, const Hyperparameters& hyper, int subclones,
                         Rng& rng);

/// Best of config.starts short pilot runs from initial_state.
ModelState starting_state(const ReadCountData& data, const Hyperparameters& hyper, int subclones,
                          const ChainConfig& config, Rng& rng);

/// Posterior simulation for a fixed number of subclones.
///
/// Holds non-owning references to the data and hyperparameters, which must
/// outlive the sampler. The sample copy numbers M and the numerators of p are
/// cached per cell and refreshed whenever the row or sample they depend on
/// changes, so each kernel touches only the cells it can alter.
class FixedCSampler {
 public:
  FixedCSampler(const ReadCountData& data, const Hyperparameters& hyper, ModelState state,
                const ChainConfig& config);

  const ModelState& state() const noexcept { return state_; }
  void set_state(ModelState state);
  const ReadCountData& data() const noexcept { return *data_; }
  const Hyperparameters& hyper() const noexcept { return *hyper_; }

  /// One scan: L, Z, (L, Z) pairs, pi, phi, theta, weight swaps, p0, then
  /// joint row updates.
  void sweep(Rng& rng);

  void update_copies(Rng& rng);
  void update_variants(Rng& rng);
  void update_pairs(Rng& rng);
  void update_pi(Rng& rng);
  void update_phi(Rng& rng);
  void update_theta(Rng& rng);
  void update_weight_swaps(Rng& rng);
  void update_p0(Rng& rng);
  /// Each row is proposed with probability row_update_prob.
  void update_rows(Rng& rng);
  bool update_row(std::size_t s, Rng& rng);

  /// Full conditional pmf of l_sc over {0..Q}; zero below z_sc.
  std::vector<double> copy_conditional(std::size_t s, std::size_t c) const;
  /// Full conditional pmf of z_sc over {0..Q}; zero above l_sc.
  std::vector<double> variant_conditional(std::size_t s, std::size_t c) const;

  /// Joint conditional of (l_sc, z_sc), pairs ordered (0,0), (1,0), (1,1),
  /// (2,0), ... ; entry q (q + 1) / 2 + z.
  std::vector<double> pair_conditional(std::size_t s, std::size_t c) const;

  struct GammaParams {
    double shape;
    double rate;
  };
  /// Conjugate Gamma posterior of each phi_t given the rest.
  std::vector<GammaParams> phi_conditional() const;
  /// m_cq = #{s : l_sc = q}, q = 0..Q.
  std::vector<int> copy_counts(std::size_t c) const;

  double log_joint() const;

  double theta_step() const noexcept { return theta_step_; }
  double p0_step() const noexcept { return p0_step_; }
  const AcceptanceCounts& acceptance() const noexcept { return counts_; }
  /// Rescales the step sizes from the acceptance seen since the last call.
  void adapt_steps();

 private:
  void refresh_cache();
  void refresh_row(std::size_t s);
  void refresh_sample(std::size_t t);
  std::vector<double> copy_log_weights(std::size_t s, std::size_t c) const;
  std::vector<double> variant_log_weights(std::size_t s, std::size_t c) const;
  std::vector<double> pair_log_weights(std::size_t s, std::size_t c) const;
  double row_kernel(std::size_t s) const;
  double sample_kernel(std::size_t t) const;

  const ReadCountData* data_;
  const Hyperparameters* hyper_;
  ModelState state_;
  RealMatrix sample_copy_;  // M
  RealMatrix numerator_;    // p_st * M_st
  double theta_step_;
  double p0_step_;
  double row_update_prob_;
  bool pair_updates_;
  bool weight_swaps_;
  AcceptanceCounts counts_;
  AcceptanceCounts window_;
};

/// Runs a fixed-C chain from initial_state. Deterministic given the rng.
ChainTrace run_fixed_C(const ReadCountData& data, const Hyperparameters& hyper, int subclones,
                       const ChainConfig& config, Rng& rng);

}  // namespace subclonal
