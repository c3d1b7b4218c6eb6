#include "subclonal/mcmc.hpp"

#include <algorithm>
#include <cmath>

#include "subclonal/errors.hpp"
#include "subclonal/priors.hpp"

namespace subclonal {

namespace {

constexpr int kAdaptEvery = 50;
constexpr double kTargetAcceptance = 0.3;

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> normalize_log_weights(const std::vector<double>& lw) {
  const double top = *std::max_element(lw.begin(), lw.end());
  if (top == kNegInf) throw std::logic_error("full conditional has no finite candidate");
  std::vector<double> pmf(lw.size());
  double total = 0.0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    pmf[i] = lw[i] == kNegInf ? 0.0 : std::exp(lw[i] - top);
    total += pmf[i];
  }
  for (double& p : pmf) p /= total;
  return pmf;
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

double inv_logit(double x) { return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

}  // namespace

void ChainConfig::validate() const {
  if (iterations < 1) throw StructuralError("iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations) throw StructuralError("need 0 <= burn_in < iterations");
  if (thin < 1) throw StructuralError("thin must be at least 1");
  if (starts < 1 || pilot_sweeps < 0) throw StructuralError("need starts >= 1 and pilot_sweeps >= 0");
  if (theta_step < 0.0 || p0_step < 0.0) throw StructuralError("step sizes must be nonnegative");
  if (row_update_prob < 0.0 || row_update_prob > 1.0)
    throw StructuralError("row_update_prob must lie in [0, 1]");
}

AcceptanceCounts& AcceptanceCounts::operator+=(const AcceptanceCounts& o) {
  theta_proposed += o.theta_proposed;
  theta_accepted += o.theta_accepted;
  p0_proposed += o.p0_proposed;
  p0_accepted += o.p0_accepted;
  row_proposed += o.row_proposed;
  swap_proposed += o.swap_proposed;
  swap_accepted += o.swap_accepted;
  row_accepted += o.row_accepted;
  dimension_proposed += o.dimension_proposed;
  dimension_accepted += o.dimension_accepted;
  return *this;
}

ModelState initial_state(const ReadCountData& data, const Hyperparameters& hyper, int subclones,
                         Rng& rng) {
  if (subclones < 1) throw StructuralError("initial_state needs C >= 1");
  const int q_max = hyper.max_copy;
  const std::size_t S = data.loci();
  const std::size_t T = data.samples();
  const auto C = static_cast<std::size_t>(subclones);

  ModelState state;
  state.subclones = subclones;
  state.copies = IntMatrix(S, C);
  state.variants = IntMatrix(S, C);
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<double> ratio(T);
    for (std::size_t t = 0; t < T; ++t) {
      const double N = data.total(s, t);
      ratio[t] = N > 0.0 ? data.variant(s, t) / N : 0.0;
    }
    const double med = T == 0 ? 0.0 : median_of(ratio);
    const int z = std::clamp(static_cast<int>(std::lround(2.0 * med)), 0, q_max);
    const int l = std::max(2, z);
    for (std::size_t c = 0; c < C; ++c) {
      state.copies(s, c) = l;
      state.variants(s, c) = z;
    }
  }

  const BetaDirichletParams params = beta_dirichlet_params(hyper, subclones);
  state.pi = RealMatrix(C, static_cast<std::size_t>(q_max + 1));
  for (std::size_t c = 0; c < C; ++c) {
    const std::vector<double> row = sample_pi(params, rng);
    std::copy(row.begin(), row.end(), state.pi.row(c).begin());
  }
  state.theta = sample_theta(T, subclones, hyper, rng);
  state.refresh_weights();
  state.phi = sample_phi(hyper, rng);
  state.p0 = sample_p0(hyper, rng);
  return state;
}

ModelState starting_state(const ReadCountData& data, const Hyperparameters& hyper, int subclones,
                          const ChainConfig& config, Rng& rng) {
  if (config.starts <= 1) return initial_state(data, hyper, subclones, rng);
  ModelState best;
  double best_lj = kNegInf;
  for (int k = 0; k < config.starts; ++k) {
    FixedCSampler pilot(data, hyper, initial_state(data, hyper, subclones, rng), config);
    for (int it = 0; it < config.pilot_sweeps; ++it) {
      pilot.sweep(rng);
      if (config.adapt_during_burn_in && (it + 1) % kAdaptEvery == 0) pilot.adapt_steps();
    }
    const double lj = pilot.log_joint();
    if (k == 0 || lj > best_lj) {
      best_lj = lj;
      best = pilot.state();
    }
  }
  return best;
}

FixedCSampler::FixedCSampler(const ReadCountData& data, const Hyperparameters& hyper,
                             ModelState state, const ChainConfig& config)
    : data_(&data),
      hyper_(&hyper),
      state_(std::move(state)),
      theta_step_(config.theta_step),
      p0_step_(config.p0_step),
      row_update_prob_(config.row_update_prob),
      pair_updates_(config.pair_updates),
      weight_swaps_(config.weight_swaps) {
  data.validate();
  hyper.validate(data.samples());
  state_.validate(hyper.max_copy);
  if (state_.loci() != data.loci() || state_.samples() != data.samples())
    throw StructuralError("state and data dimensions differ");
  refresh_cache();
}

void FixedCSampler::set_state(ModelState state) {
  state.validate(hyper_->max_copy);
  if (state.loci() != data_->loci() || state.samples() != data_->samples())
    throw StructuralError("state and data dimensions differ");
  state_ = std::move(state);
  refresh_cache();
}

void FixedCSampler::refresh_cache() {
  sample_copy_ = RealMatrix(data_->loci(), data_->samples());
  numerator_ = RealMatrix(data_->loci(), data_->samples());
  for (std::size_t s = 0; s < data_->loci(); ++s) refresh_row(s);
}

void FixedCSampler::refresh_row(std::size_t s) {
  const auto& w = state_.weights;
  for (std::size_t t = 0; t < data_->samples(); ++t) {
    double m = kBackgroundCopies * w(t, 0);
    double num = kBackgroundVariants * state_.p0 * w(t, 0);
    for (std::size_t c = 0; c < state_.copies.cols(); ++c) {
      m += w(t, c + 1) * state_.copies(s, c);
      num += w(t, c + 1) * state_.variants(s, c);
    }
    sample_copy_(s, t) = m;
    numerator_(s, t) = num;
  }
}

void FixedCSampler::refresh_sample(std::size_t t) {
  for (std::size_t s = 0; s < data_->loci(); ++s) {
    const auto& w = state_.weights;
    double m = kBackgroundCopies * w(t, 0);
    double num = kBackgroundVariants * state_.p0 * w(t, 0);
    for (std::size_t c = 0; c < state_.copies.cols(); ++c) {
      m += w(t, c + 1) * state_.copies(s, c);
      num += w(t, c + 1) * state_.variants(s, c);
    }
    sample_copy_(s, t) = m;
    numerator_(s, t) = num;
  }
}

double FixedCSampler::row_kernel(std::size_t s) const {
  double out = 0.0;
  for (std::size_t t = 0; t < data_->samples(); ++t)
    out += cell_kernel(data_->total(s, t), data_->variant(s, t), data_->exposure_at(s, t),
                       state_.phi[t], sample_copy_(s, t), numerator_(s, t));
  return out;
}

double FixedCSampler::sample_kernel(std::size_t t) const {
  double out = 0.0;
  for (std::size_t s = 0; s < data_->loci(); ++s)
    out += cell_kernel(data_->total(s, t), data_->variant(s, t), data_->exposure_at(s, t),
                       state_.phi[t], sample_copy_(s, t), numerator_(s, t));
  return out;
}

std::vector<double> FixedCSampler::copy_log_weights(std::size_t s, std::size_t c) const {
  const int q_max = hyper_->max_copy;
  const auto& w = state_.weights;
  const std::size_t T = data_->samples();
  std::vector<double> base(T);
  for (std::size_t t = 0; t < T; ++t) {
    double m = kBackgroundCopies * w(t, 0);
    for (std::size_t k = 0; k < state_.copies.cols(); ++k)
      if (k != c) m += w(t, k + 1) * state_.copies(s, k);
    base[t] = m;
  }
  std::vector<double> lw(static_cast<std::size_t>(q_max + 1), kNegInf);
  for (int q = state_.variants(s, c); q <= q_max; ++q) {
    double v = std::log(state_.pi(c, static_cast<std::size_t>(q))) - std::log(q + 1.0);
    for (std::size_t t = 0; t < T && v != kNegInf; ++t)
      v += cell_kernel(data_->total(s, t), data_->variant(s, t), data_->exposure_at(s, t),
                       state_.phi[t], base[t] + w(t, c + 1) * q, numerator_(s, t));
    lw[static_cast<std::size_t>(q)] = v;
  }
  return lw;
}

std::vector<double> FixedCSampler::variant_log_weights(std::size_t s, std::size_t c) const {
  const int q_max = hyper_->max_copy;
  const auto& w = state_.weights;
  const std::size_t T = data_->samples();
  std::vector<double> base(T);
  for (std::size_t t = 0; t < T; ++t) base[t] = numerator_(s, t) - w(t, c + 1) * state_.variants(s, c);
  std::vector<double> lw(static_cast<std::size_t>(q_max + 1), kNegInf);
  for (int z = 0; z <= state_.copies(s, c); ++z) {
    double v = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const double m = sample_copy_(s, t);
      if (m <= kMinSampleCopyNumber) continue;
      v += binomial_kernel(data_->variant(s, t), data_->total(s, t), (base[t] + w(t, c + 1) * z) / m);
    }
    lw[static_cast<std::size_t>(z)] = v;
  }
  return lw;
}

std::vector<double> FixedCSampler::copy_conditional(std::size_t s, std::size_t c) const {
  return normalize_log_weights(copy_log_weights(s, c));
}

std::vector<double> FixedCSampler::variant_conditional(std::size_t s, std::size_t c) const {
  return normalize_log_weights(variant_log_weights(s, c));
}

void FixedCSampler::update_copies(Rng& rng) {
  for (std::size_t s = 0; s < data_->loci(); ++s)
    for (std::size_t c = 0; c < state_.copies.cols(); ++c) {
      const auto lw = copy_log_weights(s, c);
      const int q = static_cast<int>(rng.categorical_log(lw));
      if (q != state_.copies(s, c)) {
        state_.copies(s, c) = q;
        refresh_row(s);
      }
    }
}

void FixedCSampler::update_variants(Rng& rng) {
  for (std::size_t s = 0; s < data_->loci(); ++s)
    for (std::size_t c = 0; c < state_.variants.cols(); ++c) {
      if (state_.copies(s, c) == 0) continue;  // z = 0 with certainty
      const auto lw = variant_log_weights(s, c);
      const int z = static_cast<int>(rng.categorical_log(lw));
      if (z != state_.variants(s, c)) {
        state_.variants(s, c) = z;
        refresh_row(s);
      }
    }
}

std::vector<double> FixedCSampler::pair_log_weights(std::size_t s, std::size_t c) const {
  const int q_max = hyper_->max_copy;
  const auto& w = state_.weights;
  const std::size_t T = data_->samples();
  std::vector<double> base_m(T), base_num(T);
  for (std::size_t t = 0; t < T; ++t) {
    base_m[t] = sample_copy_(s, t) - w(t, c + 1) * state_.copies(s, c);
    base_num[t] = numerator_(s, t) - w(t, c + 1) * state_.variants(s, c);
  }
  std::vector<double> lw;
  lw.reserve(static_cast<std::size_t>((q_max + 1) * (q_max + 2) / 2));
  for (int q = 0; q <= q_max; ++q) {
    const double prior = std::log(state_.pi(c, static_cast<std::size_t>(q))) - std::log(q + 1.0);
    for (int z = 0; z <= q; ++z) {
      double v = prior;
      for (std::size_t t = 0; t < T && v != kNegInf; ++t)
        v += cell_kernel(data_->total(s, t), data_->variant(s, t), data_->exposure_at(s, t), state_.phi[t],
                         base_m[t] + w(t, c + 1) * q, base_num[t] + w(t, c + 1) * z);
      lw.push_back(v);
    }
  }
  return lw;
}

std::vector<double> FixedCSampler::pair_conditional(std::size_t s, std::size_t c) const {
  return normalize_log_weights(pair_log_weights(s, c));
}

void FixedCSampler::update_pairs(Rng& rng) {
  for (std::size_t s = 0; s < data_->loci(); ++s)
    for (std::size_t c = 0; c < state_.copies.cols(); ++c) {
      auto k = static_cast<int>(rng.categorical_log(pair_log_weights(s, c)));
      int q = 0;
      while (k > q) k -= ++q;
      if (q != state_.copies(s, c) || k != state_.variants(s, c)) {
        state_.copies(s, c) = q;
        state_.variants(s, c) = k;
        refresh_row(s);
      }
    }
}

void FixedCSampler::update_weight_swaps(Rng& rng) {
  const int C = state_.subclones;
  if (C < 2) return;
  const std::size_t S = data_->loci();
  const auto& w = state_.weights;
  std::vector<double> new_copy(S), new_num(S);
  for (std::size_t t = 0; t < data_->samples(); ++t) {
    const auto a = static_cast<std::size_t>(rng.uniform_int(0, C - 1));
    auto b = static_cast<std::size_t>(rng.uniform_int(0, C - 2));
    if (b >= a) ++b;
    ++counts_.swap_proposed;
    // Tumor thetas share one Gamma prior, so only the likelihood changes.
    const double dw = w(t, b + 1) - w(t, a + 1);
    double delta = 0.0;
    for (std::size_t s = 0; s < S && delta != kNegInf; ++s) {
      new_copy[s] = sample_copy_(s, t) + dw * (state_.copies(s, a) - state_.copies(s, b));
      new_num[s] = numerator_(s, t) + dw * (state_.variants(s, a) - state_.variants(s, b));
      const double cand = cell_kernel(data_->total(s, t), data_->variant(s, t), data_->exposure_at(s, t),
                                      state_.phi[t], new_copy[s], new_num[s]);
      delta = cand == kNegInf ? kNegInf
                              : delta + cand -
                                    cell_kernel(data_->total(s, t), data_->variant(s, t), data_->exposure_at(s, t),
                                                state_.phi[t], sample_copy_(s, t), numerator_(s, t));
    }
    if (delta == kNegInf || std::log(rng.uniform()) >= delta) continue;
    std::swap(state_.theta(t, a + 1), state_.theta(t, b + 1));
    state_.refresh_weights(t);
    refresh_sample(t);
    ++counts_.swap_accepted;
  }
}

std::vector<int> FixedCSampler::copy_counts(std::size_t c) const {
  std::vector<int> counts(static_cast<std::size_t>(hyper_->max_copy + 1), 0);
  for (std::size_t s = 0; s < state_.copies.rows(); ++s) ++counts[static_cast<std::size_t>(state_.copies(s, c))];
  return counts;
}

void FixedCSampler::update_pi(Rng& rng) {
  const BetaDirichletParams params = beta_dirichlet_params(*hyper_, state_.subclones);
  for (std::size_t c = 0; c < state_.pi.rows(); ++c) {
    const auto counts = copy_counts(c);
    const auto row = sample_pi_given_counts(params, counts, rng);
    std::copy(row.begin(), row.end(), state_.pi.row(c).begin());
  }
}

std::vector<FixedCSampler::GammaParams> FixedCSampler::phi_conditional() const {
  std::vector<GammaParams> out(data_->samples());
  for (std::size_t t = 0; t < data_->samples(); ++t) {
    double shape = hyper_->phi_shape[t];
    double rate = hyper_->phi_rate[t];
    for (std::size_t s = 0; s < data_->loci(); ++s) {
      shape += data_->total(s, t);
      rate += 0.5 * data_->exposure_at(s, t) * sample_copy_(s, t);
    }
    out[t] = {shape, rate};
  }
  return out;
}

void FixedCSampler::update_phi(Rng& rng) {
  const auto params = phi_conditional();
  for (std::size_t t = 0; t < params.size(); ++t) state_.phi[t] = rng.gamma(params[t].shape, params[t].rate);
}

void FixedCSampler::update_theta(Rng& rng) {
  if (theta_step_ <= 0.0) return;
  const std::size_t S = data_->loci();
  const std::size_t cols = state_.theta.cols();
  std::vector<double> new_weights(cols), new_copy(S), new_num(S);
  for (std::size_t t = 0; t < data_->samples(); ++t) {
    double current = sample_kernel(t);
    for (std::size_t c = 0; c < cols; ++c) {
      const double old_theta = state_.theta(t, c);
      const double proposed = old_theta * std::exp(rng.normal(0.0, theta_step_));
      ++counts_.theta_proposed;
      ++window_.theta_proposed;
      if (!(proposed > 0.0) || !std::isfinite(proposed)) continue;

      double total = 0.0;
      for (std::size_t k = 0; k < cols; ++k) total += k == c ? proposed : state_.theta(t, k);
      for (std::size_t k = 0; k < cols; ++k) new_weights[k] = (k == c ? proposed : state_.theta(t, k)) / total;

      double candidate = 0.0;
      for (std::size_t s = 0; s < S; ++s) {
        double m = kBackgroundCopies * new_weights[0];
        double num = kBackgroundVariants * state_.p0 * new_weights[0];
        for (std::size_t k = 0; k + 1 < cols; ++k) {
          m += new_weights[k + 1] * state_.copies(s, k);
          num += new_weights[k + 1] * state_.variants(s, k);
        }
        new_copy[s] = m;
        new_num[s] = num;
        candidate += cell_kernel(data_->total(s, t), data_->variant(s, t), data_->exposure_at(s, t),
                                 state_.phi[t], m, num);
      }
      const double shape = c == 0 ? hyper_->d0 : hyper_->d;
      // Gamma(shape, 1) prior times the log-scale Jacobian.
      const double log_ratio = candidate - current + shape * (std::log(proposed) - std::log(old_theta)) -
                               (proposed - old_theta);
      if (candidate != kNegInf && std::log(rng.uniform()) < log_ratio) {
        state_.theta(t, c) = proposed;
        for (std::size_t k = 0; k < cols; ++k) state_.weights(t, k) = new_weights[k];
        for (std::size_t s = 0; s < S; ++s) {
          sample_copy_(s, t) = new_copy[s];
          numerator_(s, t) = new_num[s];
        }
        current = candidate;
        ++counts_.theta_accepted;
        ++window_.theta_accepted;
      }
    }
    // Resynchronise the weights with theta exactly.
    state_.refresh_weights(t);
    refresh_sample(t);
  }
}

void FixedCSampler::update_p0(Rng& rng) {
  if (p0_step_ <= 0.0) return;
  const double old_p0 = state_.p0;
  const double proposed = inv_logit(logit(old_p0) + rng.normal(0.0, p0_step_));
  ++counts_.p0_proposed;
  ++window_.p0_proposed;
  if (!(proposed > 0.0 && proposed < 1.0)) return;

  double delta = 0.0;
  for (std::size_t s = 0; s < data_->loci(); ++s)
    for (std::size_t t = 0; t < data_->samples(); ++t) {
      const double m = sample_copy_(s, t);
      if (m <= kMinSampleCopyNumber) continue;
      const double shift = kBackgroundVariants * state_.weights(t, 0) * (proposed - old_p0);
      const double N = data_->total(s, t);
      const double n = data_->variant(s, t);
      delta += binomial_kernel(n, N, (numerator_(s, t) + shift) / m) -
               binomial_kernel(n, N, numerator_(s, t) / m);
    }
  // Beta prior times the logit Jacobian p (1 - p).
  const double log_ratio = delta + hyper_->a00 * (std::log(proposed) - std::log(old_p0)) +
                           hyper_->b00 * (std::log1p(-proposed) - std::log1p(-old_p0));
  if (std::isfinite(delta) && std::log(rng.uniform()) < log_ratio) {
    state_.p0 = proposed;
    for (std::size_t s = 0; s < data_->loci(); ++s) refresh_row(s);
    ++counts_.p0_accepted;
    ++window_.p0_accepted;
  }
}

bool FixedCSampler::update_row(std::size_t s, Rng& rng) {
  const int q_max = hyper_->max_copy;
  const std::size_t C = state_.copies.cols();
  std::vector<int> new_copies(C), new_variants(C);
  double log_ratio = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    new_copies[c] = rng.uniform_int(0, q_max);
    new_variants[c] = rng.uniform_int(0, new_copies[c]);
    // DU(z | l) and the proposal pmf cancel; only the pi terms remain.
    log_ratio += std::log(state_.pi(c, static_cast<std::size_t>(new_copies[c]))) -
                 std::log(state_.pi(c, static_cast<std::size_t>(state_.copies(s, c))));
  }
  ++counts_.row_proposed;

  const auto& w = state_.weights;
  double candidate = 0.0;
  for (std::size_t t = 0; t < data_->samples() && candidate != kNegInf; ++t) {
    double m = kBackgroundCopies * w(t, 0);
    double num = kBackgroundVariants * state_.p0 * w(t, 0);
    for (std::size_t c = 0; c < C; ++c) {
      m += w(t, c + 1) * new_copies[c];
      num += w(t, c + 1) * new_variants[c];
    }
    candidate += cell_kernel(data_->total(s, t), data_->variant(s, t), data_->exposure_at(s, t),
                             state_.phi[t], m, num);
  }
  if (candidate == kNegInf) return false;
  log_ratio += candidate - row_kernel(s);
  if (std::log(rng.uniform()) >= log_ratio) return false;

  for (std::size_t c = 0; c < C; ++c) {
    state_.copies(s, c) = new_copies[c];
    state_.variants(s, c) = new_variants[c];
  }
  refresh_row(s);
  ++counts_.row_accepted;
  return true;
}

void FixedCSampler::update_rows(Rng& rng) {
  if (row_update_prob_ <= 0.0) return;
  for (std::size_t s = 0; s < data_->loci(); ++s)
    if (rng.uniform() < row_update_prob_) update_row(s, rng);
}

void FixedCSampler::sweep(Rng& rng) {
  update_copies(rng);
  update_variants(rng);
  if (pair_updates_) update_pairs(rng);
  update_pi(rng);
  update_phi(rng);
  update_theta(rng);
  if (weight_swaps_) update_weight_swaps(rng);
  update_p0(rng);
  update_rows(rng);
#ifndef NDEBUG
  state_.validate(hyper_->max_copy);
#endif
}

double FixedCSampler::log_joint() const { return subclonal::log_joint(state_, *data_, *hyper_); }

void FixedCSampler::adapt_steps() {
  auto rescale = [](double step, std::uint64_t proposed, std::uint64_t accepted) {
    if (proposed == 0 || step <= 0.0) return step;
    const double rate = static_cast<double>(accepted) / static_cast<double>(proposed);
    return std::clamp(step * std::exp(2.0 * (rate - kTargetAcceptance)), 1e-3, 5.0);
  };
  theta_step_ = rescale(theta_step_, window_.theta_proposed, window_.theta_accepted);
  p0_step_ = rescale(p0_step_, window_.p0_proposed, window_.p0_accepted);
  window_ = AcceptanceCounts{};
}

ChainTrace run_fixed_C(const ReadCountData& data, const Hyperparameters& hyper, int subclones,
                       const ChainConfig& config, Rng& rng) {
  config.validate();
  FixedCSampler sampler(data, hyper, starting_state(data, hyper, subclones, config, rng), config);
  ChainTrace trace;
  for (int it = 0; it < config.iterations; ++it) {
    sampler.sweep(rng);
    if (config.adapt_during_burn_in && it < config.burn_in && (it + 1) % kAdaptEvery == 0)
      sampler.adapt_steps();
    const double lj = sampler.log_joint();
    trace.subclones.push_back(subclones);
    trace.log_joint.push_back(lj);
    if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0) {
      trace.samples.push_back(sampler.state());
      trace.sample_log_joint.push_back(lj);
    }
  }
  trace.acceptance = sampler.acceptance();
  return trace;
}

}  // namespace subclonal
