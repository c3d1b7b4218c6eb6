#include "subclonal/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "subclonal/assignment.hpp"
#include "subclonal/errors.hpp"

namespace subclonal {

namespace {

Matrix<std::int64_t> column_costs(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t C = a.cols();
  Matrix<std::int64_t> cost(C, C, 0);
  for (std::size_t s = 0; s < a.rows(); ++s)
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t k = 0; k < C; ++k) cost(c, k) += std::abs(a(s, c) - b(s, k));
  return cost;
}

std::vector<std::size_t> samples_with(const ChainTrace& trace, int C) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < trace.samples.size(); ++i)
    if (trace.samples[i].subclones == C) out.push_back(i);
  return out;
}

double column_mean(const RealMatrix& m, std::size_t c) {
  double acc = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) acc += m(r, c);
  return acc / static_cast<double>(m.rows());
}

bool column_less(const IntMatrix& m, std::size_t a, std::size_t b, int& sign) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (m(r, a) != m(r, b)) {
      sign = m(r, a) < m(r, b) ? -1 : 1;
      return true;
    }
  }
  return false;
}

/// Column order by descending mean weight, then L, then Z, then the weight
/// columns themselves.
std::vector<int> canonical_order(const IntMatrix& L, const IntMatrix& Z, const RealMatrix& w) {
  const std::size_t C = L.cols();
  std::vector<double> mean(C);
  for (std::size_t c = 0; c < C; ++c) mean[c] = column_mean(w, c + 1);
  std::vector<int> order(C);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int ia, int ib) {
    const auto a = static_cast<std::size_t>(ia), b = static_cast<std::size_t>(ib);
    if (mean[a] != mean[b]) return mean[a] > mean[b];
    int sign = 0;
    if (column_less(L, a, b, sign)) return sign < 0;
    if (column_less(Z, a, b, sign)) return sign < 0;
    for (std::size_t t = 0; t < w.rows(); ++t)
      if (w(t, a + 1) != w(t, b + 1)) return w(t, a + 1) > w(t, b + 1);
    return false;
  });
  return order;
}

RealMatrix select_weight_columns(const RealMatrix& w, std::span<const int> perm) {
  RealMatrix out(w.rows(), perm.size() + 1);
  for (std::size_t t = 0; t < w.rows(); ++t) {
    out(t, 0) = w(t, 0);
    for (std::size_t c = 0; c < perm.size(); ++c) out(t, c + 1) = w(t, static_cast<std::size_t>(perm[c]) + 1);
  }
  return out;
}

RealMatrix select_rows(const RealMatrix& m, std::span<const int> perm) {
  RealMatrix out(perm.size(), m.cols());
  for (std::size_t r = 0; r < perm.size(); ++r)
    for (std::size_t q = 0; q < m.cols(); ++q) out(r, q) = m(static_cast<std::size_t>(perm[r]), q);
  return out;
}

}  // namespace

MatrixDistance matrix_distance(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw StructuralError("matrix_distance: dimension mismatch");
  const auto solved = solve_assignment_lexmin(column_costs(a, b));
  return {solved.total, solved.perm};
}

int map_C(std::span<const int> subclones) {
  if (subclones.empty()) throw StructuralError("map_C: empty trace");
  std::map<int, std::size_t> freq;
  for (int C : subclones) ++freq[C];
  int best = 0;
  std::size_t best_count = 0;
  for (const auto& [C, count] : freq) {
    if (count > best_count) {
      best = C;
      best_count = count;
    }
  }
  return best;
}

int map_C(const ChainTrace& trace) {
  std::vector<int> subclones;
  subclones.reserve(trace.samples.size());
  for (const auto& s : trace.samples) subclones.push_back(s.subclones);
  return map_C(subclones);
}

std::vector<std::pair<int, double>> C_posterior(const ChainTrace& trace) {
  if (trace.samples.empty()) throw StructuralError("C_posterior: empty trace");
  std::map<int, std::size_t> freq;
  for (const auto& s : trace.samples) ++freq[s.subclones];
  std::vector<std::pair<int, double>> out;
  for (const auto& [C, count] : freq)
    out.emplace_back(C, static_cast<double>(count) / static_cast<double>(trace.samples.size()));
  return out;
}

LEstimate point_estimate_L(const ChainTrace& trace, int C_star, const SummaryOptions& options) {
  LEstimate est;
  est.members = samples_with(trace, C_star);
  if (est.members.empty()) throw StructuralError("point_estimate_L: no samples with C = C*");

  // Evenly spaced candidates, collapsed to distinct matrices with multiplicity.
  const std::size_t n = est.members.size();
  const std::size_t K = std::max<std::size_t>(1, std::min(n, options.max_medoid_candidates));
  std::map<std::vector<int>, std::size_t> seen;
  std::vector<std::size_t> unique_sample;
  std::vector<std::int64_t> multiplicity;
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t i = est.members[k * n / K];
    const auto& values = trace.samples[i].copies.values();
    auto [it, inserted] = seen.try_emplace(std::vector<int>(values.begin(), values.end()), unique_sample.size());
    if (inserted) {
      unique_sample.push_back(i);
      multiplicity.push_back(1);
    } else {
      ++multiplicity[it->second];
    }
  }

  const std::size_t U = unique_sample.size();
  std::vector<std::int64_t> total(U, 0);
  for (std::size_t u = 0; u < U; ++u) {
    for (std::size_t v = u + 1; v < U; ++v) {
      const auto d = solve_assignment(column_costs(trace.samples[unique_sample[u]].copies,
                                                   trace.samples[unique_sample[v]].copies))
                         .total;
      total[u] += multiplicity[v] * d;
      total[v] += multiplicity[u] * d;
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(total.begin(), total.end()) - total.begin());
  est.medoid = unique_sample[best];

  // Reference: the medoid itself, in canonical column order.
  const ModelState& med = trace.samples[est.medoid];
  const auto order = canonical_order(med.copies, med.variants, med.weights);
  est.copies = select_columns(med.copies, order);
  const IntMatrix ref_Z = select_columns(med.variants, order);
  const RealMatrix ref_w = select_weight_columns(med.weights, order);

  // Alignment cost: L distance first, then Z, then w, each strictly dominating
  // the next over any complete matching.
  const auto C = static_cast<std::size_t>(C_star);
  const std::size_t S = est.copies.rows();
  const std::size_t T = ref_w.rows();
  const double z_scale = static_cast<double>(C * T + 1);
  std::int64_t max_z = 0;
  for (std::size_t i : est.members)
    for (int z : trace.samples[i].variants.values()) max_z = std::max<std::int64_t>(max_z, z);
  for (int z : ref_Z.values()) max_z = std::max<std::int64_t>(max_z, z);
  const double l_scale = static_cast<double>(static_cast<std::int64_t>(C * S) * max_z + 1) * z_scale;

  est.perm.reserve(n);
  RealMatrix cost(C, C);
  for (std::size_t i : est.members) {
    const ModelState& x = trace.samples[i];
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t k = 0; k < C; ++k) {
        std::int64_t dL = 0, dZ = 0;
        for (std::size_t s = 0; s < S; ++s) {
          dL += std::abs(est.copies(s, c) - x.copies(s, k));
          dZ += std::abs(ref_Z(s, c) - x.variants(s, k));
        }
        double dw = 0.0;
        for (std::size_t t = 0; t < T; ++t) dw += std::abs(ref_w(t, c + 1) - x.weights(t, k + 1));
        cost(c, k) = static_cast<double>(dL) * l_scale + static_cast<double>(dZ) * z_scale + dw;
      }
    }
    est.perm.push_back(solve_assignment(cost).perm);
  }
  return est;
}

ConditionalEstimates conditional_estimates(const ChainTrace& trace, const LEstimate& L_star, int max_copy) {
  const std::size_t S = L_star.copies.rows();
  const std::size_t C = L_star.copies.cols();
  const auto Q1 = static_cast<std::size_t>(max_copy + 1);
  const std::size_t T = trace.samples[L_star.members.front()].samples();

  std::vector<std::uint32_t> z_counts(S * C * Q1, 0);
  RealMatrix w_sum(T, C + 1, 0.0);
  RealMatrix pi_sum(C, Q1, 0.0);
  for (std::size_t m = 0; m < L_star.members.size(); ++m) {
    const ModelState& x = trace.samples[L_star.members[m]];
    const auto& perm = L_star.perm[m];
    for (std::size_t c = 0; c < C; ++c) {
      const auto k = static_cast<std::size_t>(perm[c]);
      for (std::size_t s = 0; s < S; ++s) ++z_counts[(s * C + c) * Q1 + static_cast<std::size_t>(x.variants(s, k))];
      for (std::size_t q = 0; q < Q1; ++q) pi_sum(c, q) += x.pi(k, q);
    }
    for (std::size_t t = 0; t < T; ++t) {
      w_sum(t, 0) += x.weights(t, 0);
      for (std::size_t c = 0; c < C; ++c) w_sum(t, c + 1) += x.weights(t, static_cast<std::size_t>(perm[c]) + 1);
    }
  }

  ConditionalEstimates out;
  out.variants = IntMatrix(S, C, 0);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t c = 0; c < C; ++c) {
      const auto* counts = &z_counts[(s * C + c) * Q1];
      const auto mode = static_cast<int>(std::max_element(counts, counts + Q1) - counts);
      out.variants(s, c) = std::min(mode, L_star.copies(s, c));
    }
  }
  const auto count = static_cast<double>(L_star.members.size());
  out.weights = RealMatrix(T, C + 1);
  for (std::size_t t = 0; t < T; ++t) {
    double row = 0.0;
    for (std::size_t c = 0; c <= C; ++c) row += w_sum(t, c);
    for (std::size_t c = 0; c <= C; ++c) out.weights(t, c) = w_sum(t, c) / row;
  }
  out.pi = RealMatrix(C, Q1);
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t q = 0; q < Q1; ++q) out.pi(c, q) = pi_sum(c, q) / count;
  return out;
}

ScalarEstimates scalar_estimates(const ChainTrace& trace, int C_star) {
  const auto members = samples_with(trace, C_star);
  if (members.empty()) throw StructuralError("scalar_estimates: no samples with C = C*");
  ScalarEstimates out;
  out.phi.assign(trace.samples[members.front()].phi.size(), 0.0);
  for (std::size_t i : members) {
    const ModelState& x = trace.samples[i];
    for (std::size_t t = 0; t < out.phi.size(); ++t) out.phi[t] += x.phi[t];
    out.p0 += x.p0;
  }
  const auto n = static_cast<double>(members.size());
  for (double& v : out.phi) v /= n;
  out.p0 /= n;
  return out;
}

void fit_residuals(PosteriorSummary& summary, const ReadCountData& data, const ResidualReference& reference) {
  summary.fitted_M = compute_M(summary.L_star, summary.w_star);
  summary.fitted_p = compute_p(summary.L_star, summary.Z_star, summary.w_star, summary.p0_star);
  const std::size_t S = data.loci(), T = data.samples();
  summary.residual_M = RealMatrix(S, T);
  summary.residual_p = RealMatrix(S, T);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t t = 0; t < T; ++t) {
      const double N = data.total(s, t);
      const double M_ref = reference.sample_copy ? (*reference.sample_copy)(s, t)
                                                 : 2.0 * N / (data.exposure_at(s, t) * summary.phi_star[t]);
      const double p_ref = N > 0.0 ? data.variant(s, t) / N : nan;
      summary.residual_M(s, t) = summary.fitted_M(s, t) - M_ref;
      summary.residual_p(s, t) = summary.fitted_p(s, t) - p_ref;
    }
  }
}

PosteriorSummary summarize(const ChainTrace& trace, const ReadCountData& data, int max_copy,
                           const SummaryOptions& options, const ResidualReference& reference) {
  PosteriorSummary out;
  out.C_star = map_C(trace);
  out.C_posterior = C_posterior(trace);
  const LEstimate L = point_estimate_L(trace, out.C_star, options);
  const ConditionalEstimates cond = conditional_estimates(trace, L, max_copy);
  const auto order = canonical_order(L.copies, cond.variants, cond.weights);
  out.L_star = select_columns(L.copies, order);
  out.Z_star = select_columns(cond.variants, order);
  out.w_star = select_weight_columns(cond.weights, order);
  out.pi_star = select_rows(cond.pi, order);
  const ScalarEstimates scalars = scalar_estimates(trace, out.C_star);
  out.phi_star = scalars.phi;
  out.p0_star = scalars.p0;
  fit_residuals(out, data, reference);
  return out;
}

}  // namespace subclonal
