#include "subclonal/priors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subclonal/errors.hpp"

namespace subclonal {

namespace {

constexpr double kPiFloor = 1e-300;
constexpr double kNonNeutralClamp = 1e-12;

}  // namespace

BetaDirichletParams beta_dirichlet_params(const Hyperparameters& hyper, int subclones) {
  if (subclones < 1) throw StructuralError("beta-Dirichlet parameters need C >= 1");
  return {hyper.alpha / subclones, hyper.beta, hyper.gamma};
}

BetaDirichletParams pi_posterior_params(const BetaDirichletParams& params, std::span<const int> counts) {
  const int q_max = params.max_copy();
  if (q_max < 2) throw StructuralError("Q must be at least 2");
  if (counts.size() != static_cast<std::size_t>(q_max + 1))
    throw StructuralError("pi counts must have Q + 1 entries");
  const int loci = std::accumulate(counts.begin(), counts.end(), 0);
  const int neutral = counts[2];
  BetaDirichletParams post;
  post.a = params.a + loci - neutral;
  post.b = params.b + neutral;
  post.gamma.resize(static_cast<std::size_t>(q_max));
  for (int q = 0, k = 0; q <= q_max; ++q) {
    if (q == 2) continue;
    post.gamma[static_cast<std::size_t>(k)] = params.gamma[static_cast<std::size_t>(k)] + counts[static_cast<std::size_t>(q)];
    ++k;
  }
  return post;
}

std::vector<double> sample_pi(const BetaDirichletParams& params, Rng& rng) {
  const int q_max = params.max_copy();
  if (q_max < 2) throw StructuralError("Q must be at least 2");
  double non_neutral = rng.beta(params.a, params.b);
  non_neutral = std::clamp(non_neutral, kNonNeutralClamp, 1.0 - kNonNeutralClamp);

  std::vector<double> tilde(params.gamma.size());
  rng.dirichlet(params.gamma, tilde);

  std::vector<double> row(static_cast<std::size_t>(q_max + 1));
  row[2] = 1.0 - non_neutral;
  for (int q = 0, k = 0; q <= q_max; ++q) {
    if (q == 2) continue;
    row[static_cast<std::size_t>(q)] = std::max(non_neutral * tilde[static_cast<std::size_t>(k++)], kPiFloor);
  }
  return row;
}

std::vector<double> sample_pi_given_counts(const BetaDirichletParams& params,
                                           std::span<const int> counts, Rng& rng) {
  return sample_pi(pi_posterior_params(params, counts), rng);
}

double logdens_pi(std::span<const double> row, const BetaDirichletParams& params) {
  const int q_max = params.max_copy();
  if (row.size() != static_cast<std::size_t>(q_max + 1))
    throw StructuralError("pi row must have Q + 1 entries");
  double total = 0.0;
  for (double v : row) {
    if (!(v >= 0.0) || v > 1.0) throw StructuralError("pi row entry outside [0, 1]");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw StructuralError("pi row does not sum to 1");

  double non_neutral = 0.0;
  for (int q = 0; q <= q_max; ++q)
    if (q != 2) non_neutral += row[static_cast<std::size_t>(q)];
  if (non_neutral <= 0.0 || non_neutral >= 1.0) return kNegInf;

  double out = log_beta_density(non_neutral, params.a, params.b);
  double gamma_sum = 0.0;
  for (int q = 0, k = 0; q <= q_max; ++q) {
    if (q == 2) continue;
    const double g = params.gamma[static_cast<std::size_t>(k++)];
    gamma_sum += g;
    out += -std::lgamma(g) + xlogy(g - 1.0, row[static_cast<std::size_t>(q)] / non_neutral);
  }
  out += std::lgamma(gamma_sum);
  // Jacobian of (u, renormalized block) -> pi_q = u * tilde_q.
  out -= (q_max - 1) * std::log(non_neutral);
  return out;
}

double logpmf_L_given_pi(const IntMatrix& copies, const RealMatrix& pi) {
  if (pi.rows() != copies.cols()) throw StructuralError("pi rows must match L columns");
  double out = 0.0;
  for (std::size_t s = 0; s < copies.rows(); ++s)
    for (std::size_t c = 0; c < copies.cols(); ++c) {
      const int q = copies(s, c);
      if (q < 0 || static_cast<std::size_t>(q) >= pi.cols()) return kNegInf;
      out += std::log(pi(c, static_cast<std::size_t>(q)));
    }
  return out;
}

double logpmf_Z_given_L(const IntMatrix& variants, const IntMatrix& copies) {
  if (variants.rows() != copies.rows() || variants.cols() != copies.cols())
    throw StructuralError("Z and L dimensions differ");
  double out = 0.0;
  for (std::size_t s = 0; s < copies.rows(); ++s)
    for (std::size_t c = 0; c < copies.cols(); ++c) {
      const int l = copies(s, c);
      const int z = variants(s, c);
      if (z < 0 || z > l) return kNegInf;
      out -= std::log(static_cast<double>(l + 1));
    }
  return out;
}

double log_gamma_density(double x, double shape, double rate) {
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double log_beta_density(double x, double a, double b) {
  if (!(x > 0.0 && x < 1.0)) return kNegInf;
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(x) +
         (b - 1.0) * std::log1p(-x);
}

double logdens_theta(const RealMatrix& theta, const Hyperparameters& hyper) {
  double out = 0.0;
  for (std::size_t t = 0; t < theta.rows(); ++t)
    for (std::size_t c = 0; c < theta.cols(); ++c)
      out += log_gamma_density(theta(t, c), c == 0 ? hyper.d0 : hyper.d, 1.0);
  return out;
}

double logdens_phi(std::span<const double> phi, const Hyperparameters& hyper) {
  if (phi.size() != hyper.phi_shape.size()) throw StructuralError("phi length mismatch");
  double out = 0.0;
  for (std::size_t t = 0; t < phi.size(); ++t)
    out += log_gamma_density(phi[t], hyper.phi_shape[t], hyper.phi_rate[t]);
  return out;
}

double logdens_p0(double p0, const Hyperparameters& hyper) {
  return log_beta_density(p0, hyper.a00, hyper.b00);
}

double logpmf_C(int subclones, const Hyperparameters& hyper) {
  if (subclones < 1) return kNegInf;
  const double r = hyper.geom_rate;
  if (r >= 1.0) return subclones == 1 ? 0.0 : kNegInf;
  return std::log(r) + (subclones - 1) * std::log1p(-r);
}

RealMatrix sample_theta(std::size_t samples, int subclones, const Hyperparameters& hyper, Rng& rng) {
  RealMatrix theta(samples, static_cast<std::size_t>(subclones + 1));
  for (std::size_t t = 0; t < samples; ++t)
    for (std::size_t c = 0; c < theta.cols(); ++c)
      theta(t, c) = rng.gamma(c == 0 ? hyper.d0 : hyper.d, 1.0);
  return theta;
}

std::vector<double> sample_phi(const Hyperparameters& hyper, Rng& rng) {
  std::vector<double> phi(hyper.phi_shape.size());
  for (std::size_t t = 0; t < phi.size(); ++t) phi[t] = rng.gamma(hyper.phi_shape[t], hyper.phi_rate[t]);
  return phi;
}

double sample_p0(const Hyperparameters& hyper, Rng& rng) {
  return std::clamp(rng.beta(hyper.a00, hyper.b00), 1e-12, 1.0 - 1e-12);
}

}  // namespace subclonal
