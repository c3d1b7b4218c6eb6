#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "subclonal/mcmc.hpp"
#include "subclonal/model.hpp"
#include "subclonal/rng.hpp"

namespace subclonal {

/// Fractional split of every cell: the training part keeps b_st of the reads
/// (and of the sequencing effort), the test part the remaining 1 - b_st.
struct TrainTestSplit {
  RealMatrix fraction;  // b_st
  ReadCountData train;
  ReadCountData test;
};

/// b_st ~ iid Be(a, b).
TrainTestSplit make_split(const ReadCountData& data, double a, double b, Rng& rng);

struct TransdimConfig {
  ChainConfig chain;
  int rj_every = 1;         // dimension move after every k sweeps
  int warm_advance = 10;    // training-chain sweeps between consecutive draws
  int warm_burn_in = 200;   // sweeps a training chain gets when first used
  int fresh_burn_in = 200;  // sweeps a full-data chain gets when its C is first visited
  int initial_subclones = 1;

  void validate(const Hyperparameters& hyper) const;
};

/// Approximate sampler for the training posterior p1(x | C), one persistent
/// warm chain per C in {1..Cmax}, each with its own random stream. Chains are
/// created on first use.
class TrainingPosterior {
 public:
  TrainingPosterior(const ReadCountData& train, const Hyperparameters& hyper, const TransdimConfig& config,
                    std::uint64_t seed);
  TrainingPosterior(const TrainingPosterior&) = delete;
  TrainingPosterior& operator=(const TrainingPosterior&) = delete;

  /// Advances the warm chain for C by warm_advance sweeps and returns its state.
  const ModelState& draw(int subclones);

  /// Unnormalized log p1(x | C) = log p(x | C) + training log-likelihood.
  double log_density(const ModelState& state) const;

  const ReadCountData& train() const noexcept { return *train_; }
  AcceptanceCounts acceptance() const;

 private:
  FixedCSampler& chain(int subclones);

  const ReadCountData* train_;
  const Hyperparameters* hyper_;
  TransdimConfig config_;
  std::uint64_t seed_;
  std::vector<std::unique_ptr<FixedCSampler>> chains_;  // index C - 1
  std::vector<std::unique_ptr<Rng>> rngs_;
};

/// log q(to | from) for the reflecting +-1 walk on {1..Cmax}.
double log_proposal_C(int from, int to, int max_subclones);

/// Position of the dimension chain: the training draw currently standing in
/// for x, and its test log-likelihood.
struct DimensionState {
  ModelState state;
  double test_loglik = 0.0;
};

using LogDensityFn = std::function<double(const ModelState&)>;

struct RjOutcome {
  int proposed = 0;
  bool accepted = false;
  double log_acceptance = 0.0;
};

/// One dimension move. The proposal x~ comes from p1(. | C~) and p1 also
/// plays the role of the prior on x, so its density enters the ratio twice
/// and cancels together with any normalizing constant. `log_p1` overrides
/// the density used for those two terms (defaults to p1.log_density).
RjOutcome rj_update_C(DimensionState& current, TrainingPosterior& p1, const ReadCountData& test,
                      const Hyperparameters& hyper, Rng& rng, const LogDensityFn& log_p1 = {});

/// Trans-dimensional run: a full-data fixed-C sweep for the current C, then a
/// dimension move every rj_every iterations. Records C at every iteration and
/// the full-data state of the current C after burn-in.
ChainTrace run_transdimensional(const ReadCountData& data, const Hyperparameters& hyper,
                                const TransdimConfig& config, Rng& rng);

}  // namespace subclonal
