#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "subclonal/errors.hpp"
#include "subclonal/io.hpp"
#include "subclonal/pipeline.hpp"

namespace {

constexpr int kUsageError = 2;

void add_run_options(CLI::App* app, subclonal::RunConfig& c) {
  app->add_option("--seed", c.seed, "Master random seed");
  app->add_option("--iters", c.iters, "MCMC iterations")->capture_default_str();
  app->add_option("--burnin", c.burnin, "Burn-in iterations")->capture_default_str();
  app->add_option("--thin", c.thin, "Keep every k-th post burn-in iteration")->capture_default_str();
  app->add_option("--Q", c.Q, "Maximum copy number")->capture_default_str();
  app->add_option("--r", c.r, "Geometric prior rate on C")->capture_default_str();
  app->add_option("--alpha", c.alpha, "Beta prior on 1 - pi_2 is Be(alpha / C, beta)")->capture_default_str();
  app->add_option("--beta", c.beta, "See --alpha")->capture_default_str();
  app->add_option("--gamma", c.gamma, "Dirichlet parameter for copy numbers other than 2")->capture_default_str();
  app->add_option("--d0", c.d0, "Gamma shape for the background theta")->capture_default_str();
  app->add_option("--d", c.d, "Gamma shape for subclone thetas")->capture_default_str();
  app->add_option("--a00", c.a00, "p0 ~ Be(a00, b00)")->capture_default_str();
  app->add_option("--b00", c.b00, "See --a00")->capture_default_str();
  app->add_option("--b", c.b, "Gamma rate of the phi prior")->capture_default_str();
  app->add_option("--phi-shape", c.phi_shape, "Gamma shape(s) of the phi prior; default b * median(N)")
      ->delimiter(',');
  app->add_option_function<std::vector<double>>(
         "--split-beta",
         [&c](const std::vector<double>& v) {
           if (v.size() != 2) throw CLI::ValidationError("--split-beta", "expects two values a,b");
           c.split_a = v[0];
           c.split_b = v[1];
         },
         "Beta(a,b) for the training fraction, e.g. 25,975")
      ->delimiter(',');
  app->add_option("--cmax", c.cmax, "Largest C visited")->capture_default_str();
  app->add_option("--chains", c.chains, "Independent chains run in parallel")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian subclone inference from paired read counts"};
  app.require_subcommand(1);
  subclonal::RunConfig config;
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "Replay the configuration stored in a manifest.json");

  auto* sim = app.add_subcommand("simulate", "Generate a simulation scenario");
  sim->add_option("--scenario", config.scenario, "sim1 | sim2 | sim2-small | lung-like")->capture_default_str();
  sim->add_option("--seed", config.seed, "Random seed");
  sim->add_option("--out", config.out, "Output directory")->required();

  auto* infer = app.add_subcommand("infer", "Run the trans-dimensional sampler");
  infer->add_option("--N", config.N_path, "Total read counts (csv)")->required();
  infer->add_option("--n", config.n_path, "Variant read counts (csv)")->required();
  infer->add_option("--out", config.out, "Output directory")->required();
  add_run_options(infer, config);

  auto* summ = app.add_subcommand("summarize", "Summarize a trace");
  summ->add_option("--N", config.N_path, "Total read counts (csv)")->required();
  summ->add_option("--n", config.n_path, "Variant read counts (csv)")->required();
  summ->add_option("--out", config.out, "Output directory")->required();
  summ->add_option("--trace", config.trace_path, "Trace file; default <out>/trace.jsonl");
  summ->add_option("--truth", config.truth_dir, "Ground-truth directory for residuals");
  summ->add_option("--Q", config.Q, "Maximum copy number")->capture_default_str();
  summ->add_flag("--heatmaps", config.heatmaps, "Also write SVG heatmaps");

  auto* score = app.add_subcommand("score", "Score a summary against a ground truth");
  score->add_option("--summary", config.summary_dir, "Summary directory; default --out");
  score->add_option("--truth", config.truth_dir, "Ground-truth directory")->required();
  score->add_option("--out", config.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  for (auto* sub : {sim, infer, summ, score})
    if (sub->parsed()) config.subcommand = sub->get_name();

  if (!manifest_path.empty()) {
    try {
      const std::string sub = config.subcommand;
      const auto out = config.out;
      config = subclonal::config_from_json(subclonal::read_json(manifest_path));
      if (config.subcommand != sub) {
        std::cerr << "manifest is for '" << config.subcommand << "', not '" << sub << "'\n";
        return kUsageError;
      }
      config.out = out;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsageError;
    }
  }
  return subclonal::run_pipeline(config);
}
