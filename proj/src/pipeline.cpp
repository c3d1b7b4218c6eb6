#include "subclonal/pipeline.hpp"

#include <exception>
#include <fstream>
#include <iostream>
#include <thread>

#include "subclonal/errors.hpp"
#include "subclonal/io.hpp"
#include "subclonal/simulate.hpp"
#include "subclonal/summary.hpp"

namespace subclonal {

namespace {

nlohmann::json manifest(const RunConfig& config, const std::vector<std::string>& outputs) {
  return {{"tool", "subclonal"}, {"version", kVersion}, {"config", to_json(config)}, {"outputs", outputs}};
}

void run_simulate(const RunConfig& config) {
  Rng rng(config.seed);
  Scenario sc;
  if (config.scenario == "sim1")
    sc = generate_sim1(rng);
  else if (config.scenario == "sim2")
    sc = generate_sim2(rng);
  else if (config.scenario == "sim2-small")
    sc = generate_sim2(rng, 50, 25);
  else if (config.scenario == "lung-like")
    sc = generate_lung_like(rng);
  else
    throw StructuralError("unknown scenario '" + config.scenario + "'");
  fs::create_directories(config.out);
  write_counts(config.out / "N.csv", config.out / "n.csv", sc.data);
  write_truth(config.out / "truth", sc.truth, sc.data);
  write_json(config.out / "manifest.json",
             manifest(config, {"N.csv", "n.csv", "truth/L_true.csv", "truth/Z_true.csv", "truth/w_true.csv",
                               "truth/phi_p0_true.csv"}));
}

void run_infer(const RunConfig& config) {
  const ReadCountData data = load_counts(config.N_path, config.n_path);
  const Hyperparameters hyper = make_hyperparameters(config, data);
  const TransdimConfig tconfig = make_transdim_config(config);
  const ChainTrace trace = run_chains(data, hyper, tconfig, config.seed, config.chains);
  fs::create_directories(config.out);
  write_trace(config.out / "trace.jsonl", trace);
  nlohmann::json m = manifest(config, {"trace.jsonl"});
  m["acceptance"] = {{"theta", {trace.acceptance.theta_accepted, trace.acceptance.theta_proposed}},
                     {"p0", {trace.acceptance.p0_accepted, trace.acceptance.p0_proposed}},
                     {"row", {trace.acceptance.row_accepted, trace.acceptance.row_proposed}},
                     {"swap", {trace.acceptance.swap_accepted, trace.acceptance.swap_proposed}},
                     {"dimension", {trace.acceptance.dimension_accepted, trace.acceptance.dimension_proposed}}};
  write_json(config.out / "manifest.json", m);
}

void run_summarize(const RunConfig& config) {
  const ReadCountData data = load_counts(config.N_path, config.n_path);
  const fs::path trace_path = config.trace_path.empty() ? config.out / "trace.jsonl" : config.trace_path;
  const ChainTrace trace = read_trace(trace_path);
  ScenarioTruth truth;
  ResidualReference reference;
  if (!config.truth_dir.empty()) {
    truth = read_truth(config.truth_dir);
    reference = {&truth.sample_copy};
  }
  const PosteriorSummary summary = summarize(trace, data, config.Q, {}, reference);
  emit_outputs(trace, summary, data, config.out, config.heatmaps);
  write_json(config.out / "summary_manifest.json", manifest(config, summary_files(config.heatmaps)));
}

void run_score(const RunConfig& config) {
  const fs::path dir = config.summary_dir.empty() ? config.out : config.summary_dir;
  if (config.truth_dir.empty()) throw StructuralError("score needs --truth");
  const PosteriorSummary summary = read_summary(dir);
  const ScenarioTruth truth = read_truth(config.truth_dir);
  const RecoveryReport report = score_recovery(summary, truth);
  nlohmann::json subclones = nlohmann::json::array();
  for (const auto& s : report.subclones)
    subclones.push_back({{"truth_column", s.truth_column + 1},
                         {"estimate_column", s.estimate_column < 0 ? 0 : s.estimate_column + 1},
                         {"mean_weight", s.mean_weight},
                         {"L_mismatch", s.L_mismatch},
                         {"Z_mismatch", s.Z_mismatch},
                         {"w_mae", s.w_mae}});
  fs::create_directories(config.out);
  write_json(config.out / "score.json", {{"C_star", report.C_star},
                                         {"C_true", report.C_true},
                                         {"C_correct", report.C_correct},
                                         {"subclones", subclones},
                                         {"p0_relative_error", report.p0_relative_error},
                                         {"phi_relative_error", report.phi_relative_error}});
}

}  // namespace

void RunConfig::validate() const {
  if (subcommand != "simulate" && subcommand != "infer" && subcommand != "summarize" && subcommand != "score")
    throw StructuralError("unknown subcommand '" + subcommand + "'");
  if (out.empty()) throw StructuralError("--out is required");
  if ((subcommand == "infer" || subcommand == "summarize") && (N_path.empty() || n_path.empty()))
    throw StructuralError("--N and --n are required");
  if (iters < 1 || burnin < 0 || burnin >= iters || thin < 1) throw StructuralError("need 0 <= burnin < iters");
  if (Q < 2) throw StructuralError("--Q must be at least 2");
  if (cmax < 2) throw StructuralError("--cmax must be at least 2");
  if (chains < 1) throw StructuralError("--chains must be positive");
  if (!(r > 0.0 && r <= 1.0)) throw StructuralError("--r must lie in (0, 1]");
  for (double v : {alpha, beta, gamma, d0, d, a00, b00, b, split_a, split_b})
    if (!(v > 0.0)) throw StructuralError("hyperparameters must be positive");
  for (double v : phi_shape)
    if (!(v > 0.0)) throw StructuralError("phi shapes must be positive");
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"subcommand", c.subcommand},
          {"N", c.N_path.string()},
          {"n", c.n_path.string()},
          {"out", c.out.string()},
          {"trace", c.trace_path.string()},
          {"truth", c.truth_dir.string()},
          {"summary", c.summary_dir.string()},
          {"scenario", c.scenario},
          {"seed", c.seed},
          {"iters", c.iters},
          {"burnin", c.burnin},
          {"thin", c.thin},
          {"Q", c.Q},
          {"r", c.r},
          {"alpha", c.alpha},
          {"beta", c.beta},
          {"gamma", c.gamma},
          {"d0", c.d0},
          {"d", c.d},
          {"a00", c.a00},
          {"b00", c.b00},
          {"b", c.b},
          {"phi_shape", c.phi_shape},
          {"split_a", c.split_a},
          {"split_b", c.split_b},
          {"cmax", c.cmax},
          {"chains", c.chains},
          {"heatmaps", c.heatmaps}};
}

RunConfig config_from_json(const nlohmann::json& j) {
  const nlohmann::json& c = j.contains("config") ? j.at("config") : j;
  RunConfig out;
  try {
    out.subcommand = c.at("subcommand").get<std::string>();
    out.N_path = c.value("N", "");
    out.n_path = c.value("n", "");
    out.out = c.value("out", "");
    out.trace_path = c.value("trace", "");
    out.truth_dir = c.value("truth", "");
    out.summary_dir = c.value("summary", "");
    out.scenario = c.value("scenario", out.scenario);
    out.seed = c.value("seed", out.seed);
    out.iters = c.value("iters", out.iters);
    out.burnin = c.value("burnin", out.burnin);
    out.thin = c.value("thin", out.thin);
    out.Q = c.value("Q", out.Q);
    out.r = c.value("r", out.r);
    out.alpha = c.value("alpha", out.alpha);
    out.beta = c.value("beta", out.beta);
    out.gamma = c.value("gamma", out.gamma);
    out.d0 = c.value("d0", out.d0);
    out.d = c.value("d", out.d);
    out.a00 = c.value("a00", out.a00);
    out.b00 = c.value("b00", out.b00);
    out.b = c.value("b", out.b);
    out.phi_shape = c.value("phi_shape", out.phi_shape);
    out.split_a = c.value("split_a", out.split_a);
    out.split_b = c.value("split_b", out.split_b);
    out.cmax = c.value("cmax", out.cmax);
    out.chains = c.value("chains", out.chains);
    out.heatmaps = c.value("heatmaps", out.heatmaps);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  return out;
}

Hyperparameters make_hyperparameters(const RunConfig& config, const ReadCountData& data) {
  Hyperparameters h = default_hyperparameters(data, config.Q, config.b);
  h.max_subclones = config.cmax;
  h.geom_rate = config.r;
  h.alpha = config.alpha;
  h.beta = config.beta;
  h.gamma.assign(static_cast<std::size_t>(config.Q), config.gamma);
  h.d0 = config.d0;
  h.d = config.d;
  h.a00 = config.a00;
  h.b00 = config.b00;
  h.split_a = config.split_a;
  h.split_b = config.split_b;
  if (!config.phi_shape.empty()) {
    if (config.phi_shape.size() == 1)
      h.phi_shape.assign(data.samples(), config.phi_shape.front());
    else if (config.phi_shape.size() == data.samples())
      h.phi_shape = config.phi_shape;
    else
      throw StructuralError("--phi-shape needs one value or one per sample");
  }
  h.validate(data.samples());
  return h;
}

TransdimConfig make_transdim_config(const RunConfig& config) {
  TransdimConfig t;
  t.chain.iterations = config.iters;
  t.chain.burn_in = config.burnin;
  t.chain.thin = config.thin;
  t.chain.seed = config.seed;
  return t;
}

ChainTrace run_chains(const ReadCountData& data, const Hyperparameters& hyper, const TransdimConfig& tconfig,
                      std::uint64_t seed, int chains) {
  std::vector<ChainTrace> traces(static_cast<std::size_t>(chains));
  std::vector<std::exception_ptr> errors(traces.size());
  auto work = [&](std::size_t k) {
    try {
      Rng rng(split_seed(seed, k));
      traces[k] = run_transdimensional(data, hyper, tconfig, rng);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  if (chains == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < traces.size(); ++k) pool.emplace_back(work, k);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ChainTrace merged = std::move(traces.front());
  for (std::size_t k = 1; k < traces.size(); ++k) {
    auto& t = traces[k];
    merged.samples.insert(merged.samples.end(), std::make_move_iterator(t.samples.begin()),
                          std::make_move_iterator(t.samples.end()));
    merged.sample_log_joint.insert(merged.sample_log_joint.end(), t.sample_log_joint.begin(), t.sample_log_joint.end());
    merged.subclones.insert(merged.subclones.end(), t.subclones.begin(), t.subclones.end());
    merged.log_joint.insert(merged.log_joint.end(), t.log_joint.begin(), t.log_joint.end());
    merged.acceptance += t.acceptance;
  }
  return merged;
}

int run_pipeline(const RunConfig& config) {
  try {
    config.validate();
    if (config.subcommand == "simulate")
      run_simulate(config);
    else if (config.subcommand == "infer")
      run_infer(config);
    else if (config.subcommand == "summarize")
      run_summarize(config);
    else
      run_score(config);
    std::error_code ec;
    fs::remove(config.out / "FAILED", ec);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (!config.out.empty()) {
      std::error_code ec;
      fs::create_directories(config.out, ec);
      std::ofstream marker(config.out / "FAILED");
      marker << config.subcommand << ": " << e.what() << '\n';
    }
    return 1;
  }
}

}  // namespace subclonal
