#include "subclonal/transdim.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "subclonal/errors.hpp"
#include "subclonal/priors.hpp"

namespace subclonal {

namespace {

constexpr int kAdaptEvery = 50;

void burn_in(FixedCSampler& sampler, int sweeps, bool adapt, Rng& rng) {
  for (int i = 0; i < sweeps; ++i) {
    sampler.sweep(rng);
    if (adapt && (i + 1) % kAdaptEvery == 0) sampler.adapt_steps();
  }
}

}  // namespace

TrainTestSplit make_split(const ReadCountData& data, double a, double b, Rng& rng) {
  if (!(a > 0.0) || !(b > 0.0)) throw StructuralError("split Beta parameters must be positive");
  data.validate();
  const std::size_t S = data.loci();
  const std::size_t T = data.samples();
  TrainTestSplit split;
  split.fraction = RealMatrix(S, T);
  split.train = data;
  split.test = data;
  split.train.exposure = RealMatrix(S, T);
  split.test.exposure = RealMatrix(S, T);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t t = 0; t < T; ++t) {
      double f = rng.beta(a, b);
      f = std::clamp(f, 1e-12, 1.0 - 1e-12);
      split.fraction(s, t) = f;
      const double e = data.exposure_at(s, t);
      split.train.total(s, t) = f * data.total(s, t);
      split.train.variant(s, t) = f * data.variant(s, t);
      split.train.exposure(s, t) = f * e;
      // Test counts are the exact remainder so the two parts reassemble N.
      split.test.total(s, t) = data.total(s, t) - split.train.total(s, t);
      split.test.variant(s, t) = data.variant(s, t) - split.train.variant(s, t);
      split.test.exposure(s, t) = e - split.train.exposure(s, t);
    }
  return split;
}

void TransdimConfig::validate(const Hyperparameters& hyper) const {
  chain.validate();
  if (hyper.max_subclones < 2) throw StructuralError("dimension moves need Cmax >= 2");
  if (rj_every < 1 || warm_advance < 1 || warm_burn_in < 0 || fresh_burn_in < 0)
    throw StructuralError("invalid dimension-move schedule");
  if (initial_subclones < 1 || initial_subclones > hyper.max_subclones)
    throw StructuralError("initial C outside {1..Cmax}");
}

TrainingPosterior::TrainingPosterior(const ReadCountData& train, const Hyperparameters& hyper,
                                     const TransdimConfig& config, std::uint64_t seed)
    : train_(&train),
      hyper_(&hyper),
      config_(config),
      seed_(seed),
      chains_(static_cast<std::size_t>(hyper.max_subclones)),
      rngs_(static_cast<std::size_t>(hyper.max_subclones)) {}

FixedCSampler& TrainingPosterior::chain(int subclones) {
  if (subclones < 1 || subclones > hyper_->max_subclones) throw StructuralError("C outside {1..Cmax}");
  const auto k = static_cast<std::size_t>(subclones - 1);
  if (!chains_[k]) {
    rngs_[k] = std::make_unique<Rng>(split_seed(seed_, k));
    Rng& rng = *rngs_[k];
    chains_[k] = std::make_unique<FixedCSampler>(*train_, *hyper_,
                                                 starting_state(*train_, *hyper_, subclones, config_.chain, rng), config_.chain);
    burn_in(*chains_[k], config_.warm_burn_in, config_.chain.adapt_during_burn_in, rng);
  }
  return *chains_[k];
}

const ModelState& TrainingPosterior::draw(int subclones) {
  FixedCSampler& sampler = chain(subclones);
  Rng& rng = *rngs_[static_cast<std::size_t>(subclones - 1)];
  for (int i = 0; i < config_.warm_advance; ++i) sampler.sweep(rng);
  return sampler.state();
}

double TrainingPosterior::log_density(const ModelState& state) const {
  const double prior = log_prior(state, *hyper_) - logpmf_C(state.subclones, *hyper_);
  if (!std::isfinite(prior)) return kNegInf;
  return prior + log_likelihood(state, *train_);
}

AcceptanceCounts TrainingPosterior::acceptance() const {
  AcceptanceCounts total;
  for (const auto& c : chains_)
    if (c) total += c->acceptance();
  return total;
}

double log_proposal_C(int from, int to, int max_subclones) {
  if (std::abs(from - to) != 1 || to < 1 || to > max_subclones) return kNegInf;
  if (from == 1 || from == max_subclones) return 0.0;
  return -std::log(2.0);
}

RjOutcome rj_update_C(DimensionState& current, TrainingPosterior& p1, const ReadCountData& test,
                      const Hyperparameters& hyper, Rng& rng, const LogDensityFn& log_p1) {
  const int C = current.state.subclones;
  const int C_max = hyper.max_subclones;
  RjOutcome out;
  if (C == 1)
    out.proposed = 2;
  else if (C == C_max)
    out.proposed = C_max - 1;
  else
    out.proposed = rng.uniform() < 0.5 ? C - 1 : C + 1;

  const ModelState& candidate = p1.draw(out.proposed);
  const double candidate_test = log_likelihood(candidate, test);
  const LogDensityFn density = log_p1 ? log_p1 : [&p1](const ModelState& x) { return p1.log_density(x); };
  const double p1_candidate = density(candidate);
  const double p1_current = density(current.state);

  // Target: p(C) p1(x | C) p(test | x). Proposal: q(C~ | C) p1(x~ | C~).
  const double target_ratio = (logpmf_C(out.proposed, hyper) + p1_candidate + candidate_test) -
                              (logpmf_C(C, hyper) + p1_current + current.test_loglik);
  const double proposal_ratio = (log_proposal_C(out.proposed, C, C_max) + p1_current) -
                                (log_proposal_C(C, out.proposed, C_max) + p1_candidate);
  out.log_acceptance = target_ratio + proposal_ratio;
  if (std::isnan(out.log_acceptance)) out.log_acceptance = kNegInf;

  if (std::log(rng.uniform()) < out.log_acceptance) {
    current.state = candidate;
    current.test_loglik = candidate_test;
    out.accepted = true;
  }
  return out;
}

ChainTrace run_transdimensional(const ReadCountData& data, const Hyperparameters& hyper,
                                const TransdimConfig& config, Rng& rng) {
  config.validate(hyper);
  data.validate();
  hyper.validate(data.samples());

  const TrainTestSplit split = make_split(data, hyper.split_a, hyper.split_b, rng);
  TrainingPosterior p1(split.train, hyper, config, rng.engine()());

  std::map<int, std::unique_ptr<FixedCSampler>> full;
  auto full_chain = [&](int subclones) -> FixedCSampler& {
    auto& slot = full[subclones];
    if (!slot) {
      slot = std::make_unique<FixedCSampler>(data, hyper, starting_state(data, hyper, subclones, config.chain, rng), config.chain);
      burn_in(*slot, config.fresh_burn_in, config.chain.adapt_during_burn_in, rng);
    }
    return *slot;
  };

  int C = config.initial_subclones;
  DimensionState dim;
  dim.state = p1.draw(C);
  dim.test_loglik = log_likelihood(dim.state, split.test);

  ChainTrace trace;
  const ChainConfig& cc = config.chain;
  for (int it = 0; it < cc.iterations; ++it) {
    FixedCSampler& sampler = full_chain(C);
    sampler.sweep(rng);
    if (cc.adapt_during_burn_in && it < cc.burn_in && (it + 1) % kAdaptEvery == 0) sampler.adapt_steps();

    if (it % config.rj_every == 0) {
      const RjOutcome move = rj_update_C(dim, p1, split.test, hyper, rng);
      ++trace.acceptance.dimension_proposed;
      if (move.accepted) {
        ++trace.acceptance.dimension_accepted;
        C = move.proposed;
      }
    }

    const FixedCSampler& now = full_chain(C);
    const double lj = now.log_joint();
    trace.subclones.push_back(C);
    trace.log_joint.push_back(lj);
    if (it >= cc.burn_in && (it - cc.burn_in) % cc.thin == 0) {
      trace.samples.push_back(now.state());
      trace.sample_log_joint.push_back(lj);
    }
  }
  for (const auto& [c, sampler] : full) trace.acceptance += sampler->acceptance();
  return trace;
}

}  // namespace subclonal
