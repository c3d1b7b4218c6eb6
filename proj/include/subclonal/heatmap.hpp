#pragma once

#include <filesystem>
#include <string>

#include "subclonal/matrix.hpp"

namespace subclonal {

/// Three-colour ramp: `low` maps to the loss colour, `mid` to neutral and
/// `high` to the gain colour, linearly in between.
struct HeatmapScale {
  double low = 0.0;
  double mid = 2.0;
  double high = 3.0;

  static HeatmapScale copy_number(int max_copy = 3) { return {0.0, 2.0, static_cast<double>(max_copy)}; }
  static HeatmapScale weight() { return {0.0, 0.5, 1.0}; }
};

/// "#rrggbb" for v under the ramp; values outside [low, high] are clamped.
std::string heatmap_color(double v, const HeatmapScale& scale);

/// Standalone SVG with one cell per matrix entry, rows top to bottom.
void write_heatmap(const std::filesystem::path& path, const RealMatrix& values, const HeatmapScale& scale);
void write_heatmap(const std::filesystem::path& path, const IntMatrix& values, const HeatmapScale& scale);

}  // namespace subclonal
