#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "subclonal/matrix.hpp"

namespace subclonal {

/// Floor below which a sample copy number M_st counts as vanished.
inline constexpr double kMinSampleCopyNumber = 1e-10;
/// The background subclone is diploid everywhere ...
inline constexpr int kBackgroundCopies = 2;
/// ... and carries two variant-eligible alleles, scaled by p0.
inline constexpr int kBackgroundVariants = 2;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Paired read-count matrices, loci in rows and samples in columns.
///
/// Counts are stored as reals so that fractional training/test portions of
/// the same data can be represented without rounding. `exposure` holds the
/// fraction of sequencing effort the counts represent; it scales the Poisson
/// mean and is empty (meaning 1 everywhere) for ordinary data.
struct ReadCountData {
  RealMatrix total;    // N
  RealMatrix variant;  // n
  RealMatrix exposure;
  std::vector<std::string> locus_ids;
  std::vector<std::string> sample_ids;

  std::size_t loci() const noexcept { return total.rows(); }
  std::size_t samples() const noexcept { return total.cols(); }
  double exposure_at(std::size_t s, std::size_t t) const {
    return exposure.empty() ? 1.0 : exposure(s, t);
  }

  /// Throws StructuralError on shape mismatch, negative counts or n > N.
  void validate() const;
};

/// Builds data with generated ids ("locus1", "sample1", ...).
ReadCountData make_read_counts(RealMatrix total, RealMatrix variant);

struct Hyperparameters {
  int max_copy = 3;       // Q
  int max_subclones = 8;  // upper bound on C for the dimension move
  double geom_rate = 0.2;
  double alpha = 2.0;
  double beta = 1.0;
  /// Dirichlet parameters for the non-neutral copy numbers, ordered
  /// q = 0, 1, 3, ..., Q (length Q).
  std::vector<double> gamma;
  double d0 = 0.5;
  double d = 1.0;
  double a00 = 0.3;
  double b00 = 5.0;
  std::vector<double> phi_shape;  // a_t
  std::vector<double> phi_rate;   // b_t
  double split_a = 25.0;
  double split_b = 975.0;

  double gamma_for(int q) const { return gamma[static_cast<std::size_t>(q < 2 ? q : q - 1)]; }
  void validate(std::size_t samples) const;
};

/// Defaults with a_t = b * median(N) so the prior mean of every phi_t equals
/// the median observed depth.
Hyperparameters default_hyperparameters(const ReadCountData& data, int max_copy = 3,
                                        double phi_rate = 3.0);

/// Sets phi_shape/phi_rate for every sample from a single (a, b) pair.
void set_phi_prior(Hyperparameters& hyper, std::size_t samples, double shape, double rate);

double median_total_count(const ReadCountData& data);

/// One point of the parameter space for a fixed number of subclones C.
/// The background column c = 0 exists only in theta/weights; L and Z hold
/// the C tumor subclones.
struct ModelState {
  int subclones = 0;
  IntMatrix copies;    // L, loci x C
  IntMatrix variants;  // Z, loci x C
  RealMatrix pi;       // C x (Q + 1)
  RealMatrix theta;    // samples x (C + 1)
  RealMatrix weights;  // theta with rows normalized
  std::vector<double> phi;
  double p0 = 0.05;

  std::size_t loci() const noexcept { return copies.rows(); }
  std::size_t samples() const noexcept { return theta.rows(); }

  void refresh_weights();
  void refresh_weights(std::size_t t);

  /// Throws StructuralError unless every type invariant holds.
  void validate(int max_copy) const;
};

RealMatrix compute_M(const IntMatrix& copies, const RealMatrix& weights);

/// Throws DegenerateStateError if any M_st <= kMinSampleCopyNumber.
RealMatrix compute_p(const IntMatrix& copies, const IntMatrix& variants,
                     const RealMatrix& weights, double p0);

/// Poisson log-likelihood of N with means exposure * phi_t * M_st / 2, using
/// lgamma so fractional counts evaluate. An empty exposure means 1.
double loglik_N(const RealMatrix& total, const RealMatrix& sample_copy,
                std::span<const double> phi, const RealMatrix& exposure = RealMatrix{});

double loglik_n(const RealMatrix& variant, const RealMatrix& total, const RealMatrix& vaf);

/// loglik_N + loglik_n; -inf when the state is degenerate.
double log_likelihood(const ModelState& state, const ReadCountData& data);

/// Sum of every prior term including the geometric prior on C.
double log_prior(const ModelState& state, const Hyperparameters& hyper);

double log_joint(const ModelState& state, const ReadCountData& data, const Hyperparameters& hyper);

// ---------------------------------------------------------------------------
// Per-cell kernels shared by the samplers. Terms depending only on the counts
// are dropped, so these are log-likelihoods up to an additive constant.

inline double xlogy(double x, double y) {
  if (x == 0.0) return 0.0;
  if (y <= 0.0) return kNegInf;
  return x * std::log(y);
}

inline double poisson_kernel(double total, double exposure, double phi, double sample_copy) {
  if (sample_copy <= kMinSampleCopyNumber) return kNegInf;
  const double mean = 0.5 * exposure * phi * sample_copy;
  return xlogy(total, mean) - mean;
}

inline double binomial_kernel(double variant, double total, double vaf) {
  vaf = vaf < 0.0 ? 0.0 : (vaf > 1.0 ? 1.0 : vaf);
  return xlogy(variant, vaf) + xlogy(total - variant, 1.0 - vaf);
}

/// `numerator` is p0 z_s0 w_t0 + sum_c w_tc z_sc, so that p_st = numerator / M_st.
inline double cell_kernel(double total, double variant, double exposure, double phi,
                          double sample_copy, double numerator) {
  const double pois = poisson_kernel(total, exposure, phi, sample_copy);
  if (pois == kNegInf) return kNegInf;
  return pois + binomial_kernel(variant, total, numerator / sample_copy);
}

}  // namespace subclonal
