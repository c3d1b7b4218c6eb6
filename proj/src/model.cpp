#include "subclonal/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subclonal/errors.hpp"
#include "subclonal/priors.hpp"

namespace subclonal {

namespace {

void require_same_shape(const RealMatrix& a, const RealMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw StructuralError(std::string(what) + ": dimension mismatch");
}

}  // namespace

void ReadCountData::validate() const {
  require_same_shape(total, variant, "read counts");
  if (!exposure.empty()) require_same_shape(total, exposure, "exposure");
  if (!locus_ids.empty() && locus_ids.size() != loci())
    throw StructuralError("locus id count does not match rows");
  if (!sample_ids.empty() && sample_ids.size() != samples())
    throw StructuralError("sample id count does not match columns");
  for (std::size_t s = 0; s < loci(); ++s)
    for (std::size_t t = 0; t < samples(); ++t) {
      const double big = total(s, t);
      const double small = variant(s, t);
      if (!(big >= 0.0) || !(small >= 0.0))
        throw StructuralError("negative read count at locus " + std::to_string(s + 1) +
                              ", sample " + std::to_string(t + 1));
      if (small > big)
        throw StructuralError("variant reads exceed total reads at locus " +
                              std::to_string(s + 1) + ", sample " + std::to_string(t + 1));
      if (!exposure.empty() && !(exposure(s, t) > 0.0) && !(exposure(s, t) == 0.0 && big == 0.0))
        throw StructuralError("exposure must be positive where reads were observed");
    }
}

ReadCountData make_read_counts(RealMatrix total, RealMatrix variant) {
  ReadCountData data;
  data.total = std::move(total);
  data.variant = std::move(variant);
  for (std::size_t s = 0; s < data.loci(); ++s) data.locus_ids.push_back("locus" + std::to_string(s + 1));
  for (std::size_t t = 0; t < data.samples(); ++t) data.sample_ids.push_back("sample" + std::to_string(t + 1));
  data.validate();
  return data;
}

void Hyperparameters::validate(std::size_t samples) const {
  if (max_copy < 2) throw StructuralError("Q must be at least 2");
  if (max_subclones < 1) throw StructuralError("Cmax must be at least 1");
  if (gamma.size() != static_cast<std::size_t>(max_copy))
    throw StructuralError("gamma must have Q entries (one per copy number other than 2)");
  if (phi_shape.size() != samples || phi_rate.size() != samples)
    throw StructuralError("phi prior must have one (a_t, b_t) pair per sample");
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  bool ok = positive(alpha) && positive(beta) && positive(d0) && positive(d) && positive(a00) &&
            positive(b00) && positive(split_a) && positive(split_b) && geom_rate > 0.0 &&
            geom_rate <= 1.0;
  for (double g : gamma) ok = ok && positive(g);
  for (double v : phi_shape) ok = ok && positive(v);
  for (double v : phi_rate) ok = ok && positive(v);
  if (!ok) throw StructuralError("hyperparameters must be strictly positive");
}

double median_total_count(const ReadCountData& data) {
  std::vector<double> all(data.total.values().begin(), data.total.values().end());
  if (all.empty()) throw StructuralError("median of an empty count matrix");
  const std::size_t mid = all.size() / 2;
  std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(mid), all.end());
  double m = all[mid];
  if (all.size() % 2 == 0) {
    const double lower = *std::max_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lower);
  }
  return m;
}

void set_phi_prior(Hyperparameters& hyper, std::size_t samples, double shape, double rate) {
  hyper.phi_shape.assign(samples, shape);
  hyper.phi_rate.assign(samples, rate);
}

Hyperparameters default_hyperparameters(const ReadCountData& data, int max_copy, double phi_rate) {
  Hyperparameters hyper;
  hyper.max_copy = max_copy;
  hyper.gamma.assign(static_cast<std::size_t>(max_copy), 0.5);
  const double med = std::max(median_total_count(data), 1.0);
  set_phi_prior(hyper, data.samples(), phi_rate * med, phi_rate);
  return hyper;
}

void ModelState::refresh_weights(std::size_t t) {
  double total = 0.0;
  for (double v : theta.row(t)) total += v;
  for (std::size_t c = 0; c < theta.cols(); ++c) weights(t, c) = theta(t, c) / total;
}

void ModelState::refresh_weights() {
  weights = RealMatrix(theta.rows(), theta.cols());
  for (std::size_t t = 0; t < theta.rows(); ++t) refresh_weights(t);
}

void ModelState::validate(int max_copy) const {
  const auto C = static_cast<std::size_t>(subclones);
  if (subclones < 1) throw StructuralError("state needs C >= 1");
  if (copies.cols() != C || variants.cols() != C || variants.rows() != copies.rows())
    throw StructuralError("L/Z dimensions inconsistent with C");
  if (pi.rows() != C || pi.cols() != static_cast<std::size_t>(max_copy + 1))
    throw StructuralError("pi dimensions inconsistent with C and Q");
  if (theta.cols() != C + 1 || weights.cols() != C + 1 || weights.rows() != theta.rows())
    throw StructuralError("theta/weights dimensions inconsistent with C");
  if (phi.size() != theta.rows()) throw StructuralError("phi length must equal sample count");
  if (!(p0 > 0.0 && p0 < 1.0)) throw StructuralError("p0 outside (0, 1)");
  for (std::size_t s = 0; s < copies.rows(); ++s)
    for (std::size_t c = 0; c < C; ++c) {
      const int l = copies(s, c);
      const int z = variants(s, c);
      if (l < 0 || l > max_copy) throw StructuralError("copy number outside {0..Q}");
      if (z < 0 || z > l) throw StructuralError("variant count outside {0..l}");
    }
  for (std::size_t c = 0; c < C; ++c) {
    double total = 0.0;
    for (double v : pi.row(c)) {
      if (!(v > 0.0 && v <= 1.0)) throw StructuralError("pi entry outside (0, 1]");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw StructuralError("pi row does not sum to 1");
  }
  for (std::size_t t = 0; t < theta.rows(); ++t) {
    double total = 0.0;
    for (std::size_t c = 0; c <= C; ++c) {
      if (!(theta(t, c) > 0.0)) throw StructuralError("theta must be positive");
      total += weights(t, c);
    }
    if (std::abs(total - 1.0) > 1e-12) throw StructuralError("weight row does not sum to 1");
    if (!(phi[t] > 0.0)) throw StructuralError("phi must be positive");
  }
}

RealMatrix compute_M(const IntMatrix& copies, const RealMatrix& weights) {
  if (weights.cols() != copies.cols() + 1)
    throw StructuralError("compute_M: weights need C + 1 columns");
  RealMatrix out(copies.rows(), weights.rows());
  for (std::size_t s = 0; s < copies.rows(); ++s)
    for (std::size_t t = 0; t < weights.rows(); ++t) {
      double m = kBackgroundCopies * weights(t, 0);
      for (std::size_t c = 0; c < copies.cols(); ++c) m += weights(t, c + 1) * copies(s, c);
      out(s, t) = m;
    }
  return out;
}

RealMatrix compute_p(const IntMatrix& copies, const IntMatrix& variants,
                     const RealMatrix& weights, double p0) {
  if (variants.rows() != copies.rows() || variants.cols() != copies.cols())
    throw StructuralError("compute_p: Z and L dimensions differ");
  RealMatrix sample_copy = compute_M(copies, weights);
  RealMatrix out(copies.rows(), weights.rows());
  for (std::size_t s = 0; s < copies.rows(); ++s)
    for (std::size_t t = 0; t < weights.rows(); ++t) {
      const double m = sample_copy(s, t);
      if (m <= kMinSampleCopyNumber)
        throw DegenerateStateError("sample copy number vanishes at locus " + std::to_string(s + 1) +
                                   ", sample " + std::to_string(t + 1));
      double num = p0 * kBackgroundVariants * weights(t, 0);
      for (std::size_t c = 0; c < copies.cols(); ++c) num += weights(t, c + 1) * variants(s, c);
      out(s, t) = num / m;
    }
  return out;
}

double loglik_N(const RealMatrix& total, const RealMatrix& sample_copy, std::span<const double> phi,
                const RealMatrix& exposure) {
  require_same_shape(total, sample_copy, "loglik_N");
  if (!exposure.empty()) require_same_shape(total, exposure, "loglik_N exposure");
  if (phi.size() != total.cols()) throw StructuralError("loglik_N: phi length mismatch");
  double out = 0.0;
  for (std::size_t s = 0; s < total.rows(); ++s)
    for (std::size_t t = 0; t < total.cols(); ++t) {
      const double N = total(s, t);
      if (!(N >= 0.0)) throw StructuralError("loglik_N: negative count");
      const double e = exposure.empty() ? 1.0 : exposure(s, t);
      const double mean = 0.5 * e * phi[t] * sample_copy(s, t);
      out += xlogy(N, mean) - mean - std::lgamma(N + 1.0);
    }
  return out;
}

double loglik_n(const RealMatrix& variant, const RealMatrix& total, const RealMatrix& vaf) {
  require_same_shape(variant, total, "loglik_n");
  require_same_shape(variant, vaf, "loglik_n");
  double out = 0.0;
  for (std::size_t s = 0; s < total.rows(); ++s)
    for (std::size_t t = 0; t < total.cols(); ++t) {
      const double N = total(s, t);
      const double n = variant(s, t);
      if (!(n >= 0.0) || n > N) throw StructuralError("loglik_n: need 0 <= n <= N");
      out += std::lgamma(N + 1.0) - std::lgamma(n + 1.0) - std::lgamma(N - n + 1.0) +
             binomial_kernel(n, N, vaf(s, t));
    }
  return out;
}

double log_likelihood(const ModelState& state, const ReadCountData& data) {
  if (state.loci() != data.loci() || state.samples() != data.samples())
    throw StructuralError("state and data dimensions differ");
  const RealMatrix sample_copy = compute_M(state.copies, state.weights);
  for (double m : sample_copy.values())
    if (m <= kMinSampleCopyNumber) return kNegInf;
  const RealMatrix vaf = compute_p(state.copies, state.variants, state.weights, state.p0);
  return loglik_N(data.total, sample_copy, state.phi, data.exposure) +
         loglik_n(data.variant, data.total, vaf);
}

double log_prior(const ModelState& state, const Hyperparameters& hyper) {
  const BetaDirichletParams params = beta_dirichlet_params(hyper, state.subclones);
  double out = logpmf_C(state.subclones, hyper);
  for (std::size_t c = 0; c < state.pi.rows(); ++c) out += logdens_pi(state.pi.row(c), params);
  out += logpmf_L_given_pi(state.copies, state.pi);
  out += logpmf_Z_given_L(state.variants, state.copies);
  out += logdens_theta(state.theta, hyper);
  out += logdens_phi(state.phi, hyper);
  out += logdens_p0(state.p0, hyper);
  return out;
}

double log_joint(const ModelState& state, const ReadCountData& data, const Hyperparameters& hyper) {
  const double prior = log_prior(state, hyper);
  if (prior == kNegInf) return kNegInf;
  return prior + log_likelihood(state, data);
}

}  // namespace subclonal
