#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "subclonal/errors.hpp"
#include "subclonal/io.hpp"
#include "subclonal/mcmc.hpp"
#include "subclonal/simulate.hpp"

using namespace subclonal;

namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("subclonal_io_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

void expect_parse_error(const std::function<void()>& f, std::size_t row, std::size_t col) {
  try {
    f();
    FAIL() << "no ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), row) << e.what();
    EXPECT_EQ(e.col(), col) << e.what();
  }
}

}  // namespace

TEST_F(IoTest, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5})
    EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST_F(IoTest, CountsRoundTrip) {
  Rng rng(90);
  const Scenario sc = generate_sim1(rng);
  write_counts(dir_ / "N.csv", dir_ / "n.csv", sc.data);
  const ReadCountData back = load_counts(dir_ / "N.csv", dir_ / "n.csv");
  EXPECT_EQ(back.total, sc.data.total);
  EXPECT_EQ(back.variant, sc.data.variant);
  EXPECT_EQ(back.locus_ids, sc.data.locus_ids);
  EXPECT_EQ(back.sample_ids, sc.data.sample_ids);
}

TEST_F(IoTest, TruthRoundTrip) {
  Rng rng(91);
  const Scenario sc = generate_sim2(rng, 100, 5);
  write_truth(dir_ / "truth", sc.truth, sc.data);
  const ScenarioTruth back = read_truth(dir_ / "truth");
  EXPECT_EQ(back.copies, sc.truth.copies);
  EXPECT_EQ(back.variants, sc.truth.variants);
  EXPECT_EQ(back.weights, sc.truth.weights);
  EXPECT_EQ(back.phi, sc.truth.phi);
  EXPECT_EQ(back.p0, sc.truth.p0);
  EXPECT_EQ(back.vaf, sc.truth.vaf);
}

TEST_F(IoTest, TraceRoundTrip) {
  Rng rng(92);
  const Scenario sc = generate_sim1(rng);
  const Hyperparameters h = default_hyperparameters(sc.data);
  ChainConfig cfg;
  cfg.iterations = 30;
  cfg.burn_in = 10;
  cfg.starts = 1;
  const ChainTrace trace = run_fixed_C(sc.data, h, 2, cfg, rng);
  write_trace(dir_ / "trace.jsonl", trace);
  const ChainTrace back = read_trace(dir_ / "trace.jsonl");
  EXPECT_EQ(back.subclones, trace.subclones);
  EXPECT_EQ(back.log_joint, trace.log_joint);
  ASSERT_EQ(back.samples.size(), trace.samples.size());
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto& a = trace.samples[i];
    const auto& b = back.samples[i];
    EXPECT_EQ(a.copies, b.copies);
    EXPECT_EQ(a.variants, b.variants);
    EXPECT_EQ(a.pi, b.pi);
    EXPECT_EQ(a.theta, b.theta);
    EXPECT_EQ(a.weights, b.weights);
    EXPECT_EQ(a.phi, b.phi);
    EXPECT_EQ(a.p0, b.p0);
  }
}

TEST_F(IoTest, EmptyFileIsAParseError) {
  EXPECT_THROW(read_table(write("empty.csv", "")), ParseError);
  EXPECT_THROW(read_table(write("header_only.csv", "locus,a,b\n")), ParseError);
  EXPECT_THROW(read_table(dir_ / "missing.csv"), ParseError);
}

TEST_F(IoTest, MalformedCellsReportPosition) {
  const auto ok_N = write("N.csv", "locus,s1,s2\nL1,10,20\nL2,30,40\n");
  expect_parse_error([&] { read_table(write("ragged.csv", "locus,s1,s2\nL1,1,2\nL2,3\n")); }, 2, 2);
  expect_parse_error([&] { read_table(write("word.csv", "locus,s1,s2\nL1,1,x\n")); }, 1, 2);
  expect_parse_error([&] { load_counts(ok_N, write("neg.csv", "locus,s1,s2\nL1,1,2\nL2,-3,4\n")); }, 2, 1);
  expect_parse_error([&] { load_counts(ok_N, write("frac.csv", "locus,s1,s2\nL1,1,2.5\nL2,3,4\n")); }, 1, 2);
  expect_parse_error([&] { load_counts(ok_N, write("big.csv", "locus,s1,s2\nL1,1,2\nL2,3,41\n")); }, 2, 2);
  expect_parse_error([&] { load_counts(ok_N, write("hdr.csv", "locus,s1,s3\nL1,1,2\nL2,3,4\n")); }, 0, 2);
  expect_parse_error([&] { load_counts(ok_N, write("ids.csv", "locus,s1,s2\nL1,1,2\nL9,3,4\n")); }, 2, 0);
}

TEST_F(IoTest, MessagesNameTheCell) {
  const auto N = write("N.csv", "locus,s1\nL1,10\n");
  try {
    load_counts(N, write("n.csv", "locus,s1\nL1,11\n"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("locus row 1, sample column 1"), std::string::npos);
  }
}

TEST_F(IoTest, JsonRoundTrip) {
  const nlohmann::json j = {{"a", 1}, {"b", {1.5, 2.5}}};
  write_json(dir_ / "x.json", j);
  EXPECT_EQ(read_json(dir_ / "x.json"), j);
  EXPECT_THROW(read_json(write("bad.json", "{oops")), ParseError);
}
