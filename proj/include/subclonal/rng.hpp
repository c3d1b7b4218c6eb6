#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace subclonal {

/// Derives an independent stream seed from a master seed (SplitMix64 finalizer
/// applied to master + golden-ratio multiples of the stream index).
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);

/// Random source owned by exactly one chain. Distribution draws are built on
/// mt19937_64 so a seed fixes every draw on a given toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal(double mean, double sd);
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);

  /// log of a Gamma(shape, 1) variate; stays finite for tiny shapes where the
  /// variate itself would underflow.
  double log_gamma_variate(double shape);
  /// Gamma(shape, rate) with E = shape / rate.
  double gamma(double shape, double rate);
  double beta(double a, double b);
  void dirichlet(std::span<const double> alpha, std::span<double> out);

  std::int64_t poisson(double mean);
  std::int64_t binomial(std::int64_t trials, double p);

  /// Index drawn with probability proportional to exp(log_weights[i]).
  /// Entries equal to -inf get probability zero.
  std::size_t categorical_log(std::span<const double> log_weights);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace subclonal
