#include "subclonal/heatmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace subclonal {

namespace {

using Rgb = std::array<double, 3>;

constexpr Rgb kLoss = {200, 40, 40};
constexpr Rgb kNeutral = {245, 245, 245};
constexpr Rgb kGain = {40, 160, 60};

constexpr int kCell = 12;

Rgb mix(const Rgb& a, const Rgb& b, double f) {
  return {a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f, a[2] + (b[2] - a[2]) * f};
}

}  // namespace

std::string heatmap_color(double v, const HeatmapScale& scale) {
  Rgb c = kNeutral;
  if (std::isnan(v)) {
    c = {128, 128, 128};
  } else if (v < scale.mid) {
    const double span = scale.mid - scale.low;
    c = span > 0 ? mix(kLoss, kNeutral, std::clamp((v - scale.low) / span, 0.0, 1.0)) : kLoss;
  } else if (v > scale.mid) {
    const double span = scale.high - scale.mid;
    c = span > 0 ? mix(kNeutral, kGain, std::clamp((v - scale.mid) / span, 0.0, 1.0)) : kGain;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(c[0])),
                static_cast<int>(std::lround(c[1])), static_cast<int>(std::lround(c[2])));
  return buf;
}

void write_heatmap(const std::filesystem::path& path, const RealMatrix& values, const HeatmapScale& scale) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto width = values.cols() * kCell;
  const auto height = values.rows() * kCell;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" shape-rendering=\"crispEdges\">\n";
  for (std::size_t r = 0; r < values.rows(); ++r)
    for (std::size_t c = 0; c < values.cols(); ++c)
      out << "<rect x=\"" << c * kCell << "\" y=\"" << r * kCell << "\" width=\"" << kCell << "\" height=\"" << kCell
          << "\" fill=\"" << heatmap_color(values(r, c), scale) << "\"/>\n";
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_heatmap(const std::filesystem::path& path, const IntMatrix& values, const HeatmapScale& scale) {
  RealMatrix real(values.rows(), values.cols());
  for (std::size_t i = 0; i < values.size(); ++i) real.values()[i] = values.values()[i];
  write_heatmap(path, real, scale);
}

}  // namespace subclonal
