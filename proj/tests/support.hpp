#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "subclonal/model.hpp"

namespace subclonal::testing {

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;  // batch-means Monte-Carlo standard error
};

inline MeanEstimate batch_means(const std::vector<double>& xs, std::size_t batches = 50) {
  MeanEstimate out;
  const std::size_t n = xs.size();
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(n);
  const std::size_t size = n / batches;
  double var = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    double m = 0.0;
    for (std::size_t i = b * size; i < (b + 1) * size; ++i) m += xs[i];
    m /= static_cast<double>(size);
    var += (m - out.mean) * (m - out.mean);
  }
  var /= static_cast<double>(batches - 1);
  out.se = std::sqrt(var / static_cast<double>(batches));
  return out;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return 0.5 * d;
}

/// Normalized exp of log weights; -inf entries become 0.
inline std::vector<double> normalize(const std::vector<double>& lw) {
  double top = -INFINITY;
  for (double v : lw) top = std::max(top, v);
  std::vector<double> p(lw.size(), 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    p[i] = std::isinf(lw[i]) ? 0.0 : std::exp(lw[i] - top);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

/// Brute-force conditionals of (l_sc), (z_sc) and (l_sc, z_sc) by evaluating
/// the full log joint at every candidate value.
inline std::vector<double> brute_copy_conditional(ModelState x, const ReadCountData& data, const Hyperparameters& h,
                                                  std::size_t s, std::size_t c) {
  std::vector<double> lw;
  for (int q = 0; q <= h.max_copy; ++q) {
    if (q < x.variants(s, c)) {
      lw.push_back(-INFINITY);
      continue;
    }
    x.copies(s, c) = q;
    lw.push_back(log_joint(x, data, h));
  }
  return normalize(lw);
}

inline std::vector<double> brute_variant_conditional(ModelState x, const ReadCountData& data,
                                                     const Hyperparameters& h, std::size_t s, std::size_t c) {
  std::vector<double> lw;
  for (int z = 0; z <= h.max_copy; ++z) {
    if (z > x.copies(s, c)) {
      lw.push_back(-INFINITY);
      continue;
    }
    x.variants(s, c) = z;
    lw.push_back(log_joint(x, data, h));
  }
  return normalize(lw);
}

inline std::vector<double> brute_pair_conditional(ModelState x, const ReadCountData& data, const Hyperparameters& h,
                                                  std::size_t s, std::size_t c) {
  std::vector<double> lw;
  for (int q = 0; q <= h.max_copy; ++q)
    for (int z = 0; z <= q; ++z) {
      x.copies(s, c) = q;
      x.variants(s, c) = z;
      lw.push_back(log_joint(x, data, h));
    }
  return normalize(lw);
}

}  // namespace subclonal::testing
