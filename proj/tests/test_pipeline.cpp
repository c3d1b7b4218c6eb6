#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "subclonal/io.hpp"
#include "subclonal/pipeline.hpp"
#include "subclonal/simulate.hpp"
#include "subclonal/summary.hpp"

using namespace subclonal;

namespace {

const fs::path kRoot = fs::temp_directory_path() / ("subclonal_cli_" + std::to_string(::getpid()));

int cli(const std::string& args) {
  const std::string cmd = std::string(SUBCLONAL_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Manifests record their own output directory; compare everything else.
std::string comparable(const fs::path& p) {
  if (p.extension() != ".json") return slurp(p);
  auto j = read_json(p);
  if (j.contains("config")) j["config"].erase("out");
  return j.dump();
}

std::string d(const fs::path& p) { return (kRoot / p).string(); }

constexpr const char* kFast = " --iters 60 --burnin 20 --cmax 3";

class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fs::remove_all(kRoot);
    ASSERT_EQ(cli("simulate --scenario sim1 --seed 7 --out " + d("sim")), 0);
  }
  static void TearDownTestSuite() { fs::remove_all(kRoot); }
  static std::string counts() { return " --N " + d("sim/N.csv") + " --n " + d("sim/n.csv"); }
};

}  // namespace

TEST_F(Pipeline, UnknownFlagIsUsageError) {
  EXPECT_EQ(cli("infer" + counts() + " --out " + d("x") + " --bogus 3"), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
  EXPECT_EQ(cli("infer --out " + d("x")), 2);
  EXPECT_EQ(cli("--help"), 0);
}

TEST_F(Pipeline, SimulateIsDeterministic) {
  ASSERT_EQ(cli("simulate --scenario sim1 --seed 7 --out " + d("sim_again")), 0);
  for (const char* f : {"N.csv", "n.csv", "truth/L_true.csv", "truth/w_true.csv", "manifest.json"})
    EXPECT_EQ(comparable(kRoot / "sim" / f), comparable(kRoot / "sim_again" / f)) << f;
}

TEST_F(Pipeline, InferAndSummarizeAreByteIdentical) {
  for (const char* run : {"a", "b"}) {
    ASSERT_EQ(cli("infer" + counts() + " --seed 11" + kFast + " --out " + d(run)), 0);
    ASSERT_EQ(cli("summarize" + counts() + " --heatmaps --truth " + d("sim/truth") + " --out " + d(run)), 0);
    ASSERT_EQ(cli("score --truth " + d("sim/truth") + " --out " + d(run)), 0);
  }
  std::vector<std::string> files = summary_files(true);
  files.insert(files.end(), {"trace.jsonl", "manifest.json", "summary_manifest.json", "score.json"});
  for (const auto& f : files) {
    ASSERT_TRUE(fs::exists(kRoot / "a" / f)) << f;
    EXPECT_EQ(comparable(kRoot / "a" / f), comparable(kRoot / "b" / f)) << f;
  }
  EXPECT_FALSE(fs::exists(kRoot / "a" / "FAILED"));
}

TEST_F(Pipeline, ManifestReplayReproducesTrace) {
  ASSERT_EQ(cli("infer" + counts() + " --seed 12 --chains 2 --Q 4 --r 0.3" + kFast + " --out " + d("orig")), 0);
  ASSERT_EQ(cli("--manifest " + d("orig/manifest.json") + " infer" + counts() + " --out " + d("replay")), 0);
  EXPECT_EQ(slurp(kRoot / "orig" / "trace.jsonl"), slurp(kRoot / "replay" / "trace.jsonl"));
  const auto m = read_json(kRoot / "replay" / "manifest.json");
  EXPECT_EQ(m["config"]["Q"], 4);
  EXPECT_EQ(m["config"]["chains"], 2);
  EXPECT_EQ(m["version"], kVersion);
  EXPECT_EQ(cli("--manifest " + d("orig/manifest.json") + " simulate --out " + d("wrong")), 2);
}

TEST_F(Pipeline, BadInputLeavesFailedMarker) {
  fs::create_directories(kRoot / "bad");
  std::ofstream(kRoot / "bad" / "n.csv") << "locus,s1\nL1,5\n";
  std::ofstream(kRoot / "bad" / "N.csv") << "locus,s1\nL1,4\n";
  EXPECT_EQ(cli("infer --N " + d("bad/N.csv") + " --n " + d("bad/n.csv") + " --out " + d("bad/out")), 1);
  const std::string marker = slurp(kRoot / "bad" / "out" / "FAILED");
  EXPECT_NE(marker.find("infer:"), std::string::npos);
  EXPECT_NE(marker.find("locus row 1, sample column 1"), std::string::npos);
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.subcommand = "infer";
  c.out = "/tmp/x";
  c.seed = 99;
  c.phi_shape = {1.0, 2.0};
  c.split_a = 30;
  c.split_b = 970;
  const RunConfig back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  RunConfig bad = c;
  bad.iters = 10;
  bad.burnin = 20;
  EXPECT_THROW(bad.validate(), std::exception);
}

TEST(LungLayout, ResidualsCenteredAtZero) {
  Rng rng(3);
  const Scenario sc = generate_lung_like(rng);
  RunConfig c;
  c.iters = 2000;
  c.burnin = 800;
  c.split_a = 30;
  c.split_b = 970;
  const Hyperparameters h = make_hyperparameters(c, sc.data);
  const ChainTrace trace = run_chains(sc.data, h, make_transdim_config(c), 5, 1);
  const PosteriorSummary sum = summarize(trace, sc.data, c.Q);
  double mean = 0.0;
  std::size_t count = 0;
  for (double r : sum.residual_p.values())
    if (!std::isnan(r)) {
      mean += r;
      ++count;
    }
  EXPECT_NEAR(mean / static_cast<double>(count), 0.0, 0.05);
}
