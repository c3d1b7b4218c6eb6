#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "subclonal/mcmc.hpp"
#include "subclonal/model.hpp"
#include "subclonal/transdim.hpp"

namespace subclonal {

inline constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  std::string subcommand;  // simulate | infer | summarize | score
  std::filesystem::path N_path;
  std::filesystem::path n_path;
  std::filesystem::path out;
  std::filesystem::path trace_path;   // summarize: defaults to <out>/trace.jsonl
  std::filesystem::path truth_dir;    // summarize/score: optional ground truth
  std::filesystem::path summary_dir;  // score: defaults to <out>
  std::string scenario = "sim1";      // simulate: sim1 | sim2 | sim2-small | lung-like
  std::uint64_t seed = 1;

  int iters = 16000;
  int burnin = 6000;
  int thin = 1;
  int Q = 3;
  double r = 0.2;
  double alpha = 2.0;
  double beta = 1.0;
  double gamma = 0.5;
  double d0 = 0.5;
  double d = 1.0;
  double a00 = 0.3;
  double b00 = 5.0;
  double b = 3.0;
  /// a_t; empty means b * median(N) for every sample.
  std::vector<double> phi_shape;
  double split_a = 25.0;
  double split_b = 975.0;
  int cmax = 8;
  int chains = 1;
  bool heatmaps = false;

  /// Throws StructuralError on out-of-domain values.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

Hyperparameters make_hyperparameters(const RunConfig& config, const ReadCountData& data);
TransdimConfig make_transdim_config(const RunConfig& config);

/// Runs config.chains independent trans-dimensional chains (chain k seeded
/// with split_seed(seed, k)) on separate threads and concatenates their
/// traces in chain order.
ChainTrace run_chains(const ReadCountData& data, const Hyperparameters& hyper, const TransdimConfig& tconfig,
                      std::uint64_t seed, int chains);

/// Executes one subcommand. Returns 0 on success and 1 on failure, in which
/// case a FAILED file describing the error is left in the output directory.
int run_pipeline(const RunConfig& config);

}  // namespace subclonal
