#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "subclonal/matrix.hpp"
#include "subclonal/mcmc.hpp"
#include "subclonal/model.hpp"
#include "subclonal/simulate.hpp"
#include "subclonal/summary.hpp"

namespace subclonal {

namespace fs = std::filesystem;

/// Comma-separated table: a header row whose first cell labels the row ids,
/// then one row per record with its id first.
struct Table {
  std::string corner;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  RealMatrix values;
};

/// Throws ParseError with 1-based data row and value column on malformed input.
Table read_table(const fs::path& path);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

void write_table(const fs::path& path, const std::string& corner, const std::vector<std::string>& row_ids,
                 const std::vector<std::string>& col_ids, const RealMatrix& values);
void write_table(const fs::path& path, const std::string& corner, const std::vector<std::string>& row_ids,
                 const std::vector<std::string>& col_ids, const IntMatrix& values);

/// Loads the total and variant count tables. Both must carry the same ids;
/// entries must be nonnegative integers with n <= N.
ReadCountData load_counts(const fs::path& path_N, const fs::path& path_n);
void write_counts(const fs::path& path_N, const fs::path& path_n, const ReadCountData& data);

IntMatrix to_int_matrix(const RealMatrix& m, const fs::path& source);

/// One JSON object per retained sample, preceded by a header line carrying
/// the per-iteration C and log joint.
void write_trace(const fs::path& path, const ChainTrace& trace);
ChainTrace read_trace(const fs::path& path);

void write_truth(const fs::path& dir, const ScenarioTruth& truth, const ReadCountData& data);
ScenarioTruth read_truth(const fs::path& dir);

/// Files written by emit_outputs, relative to the output directory.
std::vector<std::string> summary_files(bool heatmaps);

void emit_outputs(const ChainTrace& trace, const PosteriorSummary& summary, const ReadCountData& data,
                  const fs::path& outdir, bool heatmaps);

/// Reads back L*, Z*, w*, phi* and p0* (enough for scoring).
PosteriorSummary read_summary(const fs::path& dir);

void write_json(const fs::path& path, const nlohmann::json& value);
nlohmann::json read_json(const fs::path& path);

}  // namespace subclonal
