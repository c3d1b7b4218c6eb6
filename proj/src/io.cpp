#include "subclonal/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "subclonal/errors.hpp"
#include "subclonal/heatmap.hpp"

namespace subclonal {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

template <typename T>
void write_table_impl(const fs::path& path, const std::string& corner, const std::vector<std::string>& row_ids,
                      const std::vector<std::string>& col_ids, const Matrix<T>& values) {
  if (row_ids.size() != values.rows() || col_ids.size() != values.cols())
    throw StructuralError("write_table: id count does not match matrix shape");
  auto out = open_out(path);
  out << corner;
  for (const auto& id : col_ids) out << ',' << id;
  out << '\n';
  for (std::size_t r = 0; r < values.rows(); ++r) {
    out << row_ids[r];
    for (std::size_t c = 0; c < values.cols(); ++c) {
      if constexpr (std::is_same_v<T, double>)
        out << ',' << format_double(values(r, c));
      else
        out << ',' << values(r, c);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n, std::size_t first = 1) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + first));
  return out;
}

nlohmann::json matrix_json(const IntMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"values", std::vector<int>(m.values().begin(), m.values().end())}};
}

nlohmann::json matrix_json(const RealMatrix& m) {
  return {{"rows", m.rows()},
          {"cols", m.cols()},
          {"values", std::vector<double>(m.values().begin(), m.values().end())}};
}

template <typename T>
Matrix<T> matrix_from_json(const nlohmann::json& j) {
  Matrix<T> m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto values = j.at("values").get<std::vector<T>>();
  if (values.size() != m.size()) throw ParseError("trace: matrix size mismatch");
  std::copy(values.begin(), values.end(), m.values().begin());
  return m;
}

RealMatrix column(const std::vector<double>& v) {
  RealMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

Table read_table(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw ParseError("empty input: " + path.string());

  Table table;
  auto header = split_line(trim(line));
  table.corner = trim(header.front());
  for (std::size_t j = 1; j < header.size(); ++j) table.col_ids.push_back(trim(header[j]));
  if (table.col_ids.empty()) throw ParseError("header has no value columns: " + path.string(), 0, 1);

  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    ++row;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      throw ParseError(path.string() + ": ragged row " + std::to_string(row) + " (expected " +
                           std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()) + ")",
                       row, std::min(cells.size(), header.size()));
    table.row_ids.push_back(trim(cells[0]));
    for (std::size_t j = 1; j < cells.size(); ++j) {
      double v = 0.0;
      const std::string cell = trim(cells[j]);
      if (cell == "nan") {
        v = std::nan("");
      } else if (!parse_double(cell, v)) {
        throw ParseError(path.string() + ": not a number at row " + std::to_string(row) + ", column " +
                             std::to_string(j) + ": '" + cell + "'",
                         row, j);
      }
      values.push_back(v);
    }
  }
  if (row == 0) throw ParseError("empty input (no data rows): " + path.string());
  table.values = RealMatrix(row, table.col_ids.size());
  std::copy(values.begin(), values.end(), table.values.values().begin());
  return table;
}

void write_table(const fs::path& path, const std::string& corner, const std::vector<std::string>& row_ids,
                 const std::vector<std::string>& col_ids, const RealMatrix& values) {
  write_table_impl(path, corner, row_ids, col_ids, values);
}

void write_table(const fs::path& path, const std::string& corner, const std::vector<std::string>& row_ids,
                 const std::vector<std::string>& col_ids, const IntMatrix& values) {
  write_table_impl(path, corner, row_ids, col_ids, values);
}

IntMatrix to_int_matrix(const RealMatrix& m, const fs::path& source) {
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      if (!(v == std::floor(v)) || std::abs(v) > 1e9)
        throw ParseError(source.string() + ": expected an integer at row " + std::to_string(r + 1) + ", column " +
                             std::to_string(c + 1),
                         r + 1, c + 1);
      out(r, c) = static_cast<int>(v);
    }
  return out;
}

ReadCountData load_counts(const fs::path& path_N, const fs::path& path_n) {
  const Table N = read_table(path_N);
  const Table n = read_table(path_n);
  for (std::size_t j = 0; j < std::max(N.col_ids.size(), n.col_ids.size()); ++j) {
    if (j >= N.col_ids.size() || j >= n.col_ids.size() || N.col_ids[j] != n.col_ids[j])
      throw ParseError("header mismatch between count files at sample column " + std::to_string(j + 1), 0, j + 1);
  }
  for (std::size_t i = 0; i < std::max(N.row_ids.size(), n.row_ids.size()); ++i) {
    if (i >= N.row_ids.size() || i >= n.row_ids.size() || N.row_ids[i] != n.row_ids[i])
      throw ParseError("locus id mismatch between count files at row " + std::to_string(i + 1), i + 1, 0);
  }
  for (std::size_t s = 0; s < N.values.rows(); ++s)
    for (std::size_t t = 0; t < N.values.cols(); ++t) {
      const std::string where = " at locus row " + std::to_string(s + 1) + ", sample column " + std::to_string(t + 1);
      for (const Table* tab : {&N, &n}) {
        const double v = tab->values(s, t);
        if (!(v >= 0.0)) throw ParseError("negative or missing count" + where, s + 1, t + 1);
        if (v != std::floor(v)) throw ParseError("non-integer count" + where, s + 1, t + 1);
      }
      if (n.values(s, t) > N.values(s, t)) throw ParseError("variant reads exceed total reads" + where, s + 1, t + 1);
    }
  ReadCountData data;
  data.total = N.values;
  data.variant = n.values;
  data.locus_ids = N.row_ids;
  data.sample_ids = N.col_ids;
  data.validate();
  return data;
}

void write_counts(const fs::path& path_N, const fs::path& path_n, const ReadCountData& data) {
  write_table(path_N, "locus", data.locus_ids, data.sample_ids, data.total);
  write_table(path_n, "locus", data.locus_ids, data.sample_ids, data.variant);
}

void write_trace(const fs::path& path, const ChainTrace& trace) {
  auto out = open_out(path);
  nlohmann::json head = {{"subclones", trace.subclones},
                         {"log_joint", trace.log_joint},
                         {"retained", trace.samples.size()}};
  out << head.dump() << '\n';
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const ModelState& x = trace.samples[i];
    nlohmann::json j = {{"C", x.subclones},
                        {"L", matrix_json(x.copies)},
                        {"Z", matrix_json(x.variants)},
                        {"pi", matrix_json(x.pi)},
                        {"theta", matrix_json(x.theta)},
                        {"phi", x.phi},
                        {"p0", x.p0},
                        {"log_joint", trace.sample_log_joint[i]}};
    out << j.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ChainTrace read_trace(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw ParseError("empty input: " + path.string());
  ChainTrace trace;
  try {
    const auto head = nlohmann::json::parse(line);
    trace.subclones = head.at("subclones").get<std::vector<int>>();
    trace.log_joint = head.at("log_joint").get<std::vector<double>>();
    std::size_t row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      ModelState x;
      x.subclones = j.at("C").get<int>();
      x.copies = matrix_from_json<int>(j.at("L"));
      x.variants = matrix_from_json<int>(j.at("Z"));
      x.pi = matrix_from_json<double>(j.at("pi"));
      x.theta = matrix_from_json<double>(j.at("theta"));
      x.refresh_weights();
      x.phi = j.at("phi").get<std::vector<double>>();
      x.p0 = j.at("p0").get<double>();
      trace.samples.push_back(std::move(x));
      trace.sample_log_joint.push_back(j.at("log_joint").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return trace;
}

void write_truth(const fs::path& dir, const ScenarioTruth& truth, const ReadCountData& data) {
  fs::create_directories(dir);
  const auto subclones = numbered("subclone", truth.copies.cols());
  write_table(dir / "L_true.csv", "locus", data.locus_ids, subclones, truth.copies);
  write_table(dir / "Z_true.csv", "locus", data.locus_ids, subclones, truth.variants);
  std::vector<std::string> wcols{"background"};
  wcols.insert(wcols.end(), subclones.begin(), subclones.end());
  write_table(dir / "w_true.csv", "sample", data.sample_ids, wcols, truth.weights);
  std::vector<std::string> names;
  std::vector<double> values;
  for (std::size_t t = 0; t < truth.phi.size(); ++t) {
    names.push_back("phi_" + data.sample_ids[t]);
    values.push_back(truth.phi[t]);
  }
  names.emplace_back("p0");
  values.push_back(truth.p0);
  write_table(dir / "phi_p0_true.csv", "parameter", names, {"value"}, column(values));
}

ScenarioTruth read_truth(const fs::path& dir) {
  ScenarioTruth truth;
  truth.copies = to_int_matrix(read_table(dir / "L_true.csv").values, dir / "L_true.csv");
  truth.variants = to_int_matrix(read_table(dir / "Z_true.csv").values, dir / "Z_true.csv");
  truth.weights = read_table(dir / "w_true.csv").values;
  const Table scalars = read_table(dir / "phi_p0_true.csv");
  for (std::size_t i = 0; i + 1 < scalars.values.rows(); ++i) truth.phi.push_back(scalars.values(i, 0));
  truth.p0 = scalars.values(scalars.values.rows() - 1, 0);
  truth.refresh();
  return truth;
}

std::vector<std::string> summary_files(bool heatmaps) {
  std::vector<std::string> files = {"C_posterior.csv", "L_star.csv",      "Z_star.csv",      "w_star.csv",
                                    "pi_star.csv",     "phi_p0.csv",      "residuals_M.csv", "residuals_p.csv",
                                    "trace_scalars.csv"};
  if (heatmaps)
    for (const char* f : {"L_star.svg", "Z_star.svg", "w_star.svg"}) files.emplace_back(f);
  return files;
}

void emit_outputs(const ChainTrace& trace, const PosteriorSummary& summary, const ReadCountData& data,
                  const fs::path& outdir, bool heatmaps) {
  fs::create_directories(outdir);
  {
    RealMatrix freq(summary.C_posterior.size(), 1);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < summary.C_posterior.size(); ++i) {
      ids.push_back(std::to_string(summary.C_posterior[i].first));
      freq(i, 0) = summary.C_posterior[i].second;
    }
    write_table(outdir / "C_posterior.csv", "C", ids, {"frequency"}, freq);
  }
  const auto subclones = numbered("subclone", summary.L_star.cols());
  write_table(outdir / "L_star.csv", "locus", data.locus_ids, subclones, summary.L_star);
  write_table(outdir / "Z_star.csv", "locus", data.locus_ids, subclones, summary.Z_star);
  std::vector<std::string> wcols{"background"};
  wcols.insert(wcols.end(), subclones.begin(), subclones.end());
  write_table(outdir / "w_star.csv", "sample", data.sample_ids, wcols, summary.w_star);
  write_table(outdir / "pi_star.csv", "subclone", subclones, numbered("q", summary.pi_star.cols(), 0),
              summary.pi_star);
  {
    std::vector<std::string> names;
    std::vector<double> values;
    for (std::size_t t = 0; t < summary.phi_star.size(); ++t) {
      names.push_back("phi_" + data.sample_ids[t]);
      values.push_back(summary.phi_star[t]);
    }
    names.emplace_back("p0");
    values.push_back(summary.p0_star);
    write_table(outdir / "phi_p0.csv", "parameter", names, {"value"}, column(values));
  }
  write_table(outdir / "residuals_M.csv", "locus", data.locus_ids, data.sample_ids, summary.residual_M);
  write_table(outdir / "residuals_p.csv", "locus", data.locus_ids, data.sample_ids, summary.residual_p);
  {
    RealMatrix scalars(trace.subclones.size(), 2);
    for (std::size_t i = 0; i < trace.subclones.size(); ++i) {
      scalars(i, 0) = trace.subclones[i];
      scalars(i, 1) = trace.log_joint[i];
    }
    write_table(outdir / "trace_scalars.csv", "iteration", numbered("", trace.subclones.size()), {"C", "log_joint"},
                scalars);
  }
  if (heatmaps) {
    write_heatmap(outdir / "L_star.svg", summary.L_star, HeatmapScale::copy_number());
    write_heatmap(outdir / "Z_star.svg", summary.Z_star, HeatmapScale::copy_number());
    write_heatmap(outdir / "w_star.svg", summary.w_star, HeatmapScale::weight());
  }
}

PosteriorSummary read_summary(const fs::path& dir) {
  PosteriorSummary out;
  out.L_star = to_int_matrix(read_table(dir / "L_star.csv").values, dir / "L_star.csv");
  out.Z_star = to_int_matrix(read_table(dir / "Z_star.csv").values, dir / "Z_star.csv");
  out.C_star = static_cast<int>(out.L_star.cols());
  out.w_star = read_table(dir / "w_star.csv").values;
  out.pi_star = read_table(dir / "pi_star.csv").values;
  const Table scalars = read_table(dir / "phi_p0.csv");
  for (std::size_t i = 0; i + 1 < scalars.values.rows(); ++i) out.phi_star.push_back(scalars.values(i, 0));
  out.p0_star = scalars.values(scalars.values.rows() - 1, 0);
  const Table post = read_table(dir / "C_posterior.csv");
  for (std::size_t i = 0; i < post.values.rows(); ++i)
    out.C_posterior.emplace_back(std::stoi(post.row_ids[i]), post.values(i, 0));
  return out;
}

void write_json(const fs::path& path, const nlohmann::json& value) {
  auto out = open_out(path);
  out << value.dump(2) << '\n';
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace subclonal
