#pragma once

#include <span>
#include <vector>

#include "subclonal/matrix.hpp"
#include "subclonal/model.hpp"
#include "subclonal/rng.hpp"

namespace subclonal {

/// Beta-Dirichlet prior on one row of pi: 1 - pi_2 ~ Be(a, b) and the
/// renormalized non-neutral entries ~ Dir(gamma).
struct BetaDirichletParams {
  double a = 1.0;  // alpha / C
  double b = 1.0;
  std::vector<double> gamma;  // q = 0, 1, 3, ..., Q

  int max_copy() const noexcept { return static_cast<int>(gamma.size()); }
};

BetaDirichletParams beta_dirichlet_params(const Hyperparameters& hyper, int subclones);

/// Draws one pi row of length Q + 1. Entries are kept at least 1e-300 away
/// from the simplex boundary.
std::vector<double> sample_pi(const BetaDirichletParams& params, Rng& rng);

/// Conjugate update of the parameters given category counts m_q.
BetaDirichletParams pi_posterior_params(const BetaDirichletParams& params, std::span<const int> counts);

/// Conjugate draw given category counts m_q = #{s : l_sc = q} for one
/// subclone: 1 - pi_2 ~ Be(a + S - m_2, b + m_2), off-2 block ~ Dir(gamma + m).
/// All-zero counts give a prior draw.
std::vector<double> sample_pi_given_counts(const BetaDirichletParams& params,
                                           std::span<const int> counts, Rng& rng);

/// Log density with respect to Lebesgue measure on the Q free coordinates
/// (pi_q, q != 2). Throws StructuralError if the row is off the simplex.
double logdens_pi(std::span<const double> row, const BetaDirichletParams& params);

double logpmf_L_given_pi(const IntMatrix& copies, const RealMatrix& pi);
/// Discrete-uniform z | l; -inf if some z > l.
double logpmf_Z_given_L(const IntMatrix& variants, const IntMatrix& copies);

double log_gamma_density(double x, double shape, double rate);
double log_beta_density(double x, double a, double b);

/// theta_t0 ~ Gamma(d0, 1), theta_tc ~ Gamma(d, 1).
double logdens_theta(const RealMatrix& theta, const Hyperparameters& hyper);
double logdens_phi(std::span<const double> phi, const Hyperparameters& hyper);
double logdens_p0(double p0, const Hyperparameters& hyper);
/// Geometric on {1, 2, ...} with mean 1/r.
double logpmf_C(int subclones, const Hyperparameters& hyper);

RealMatrix sample_theta(std::size_t samples, int subclones, const Hyperparameters& hyper, Rng& rng);
std::vector<double> sample_phi(const Hyperparameters& hyper, Rng& rng);
double sample_p0(const Hyperparameters& hyper, Rng& rng);

}  // namespace subclonal
