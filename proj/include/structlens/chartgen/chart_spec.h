#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "structlens/core/color.h"

namespace structlens::chartgen {

enum class ChartKind { line, bar, scatter };
enum class LegendPosition { inside_top_right, right_of_axes, below_axes };

std::string_view to_string(ChartKind k);
std::string_view to_string(LegendPosition p);
ChartKind chart_kind_from_string(std::string_view s);

struct DataPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

struct Series {
  std::string name;
  ColorRGB color;
  std::vector<DataPoint> points;
  friend bool operator==(const Series&, const Series&) = default;
};

struct Canvas {
  int width = 640;
  int height = 480;
  friend bool operator==(const Canvas&, const Canvas&) = default;
};

struct ChartSpec {
  ChartKind chart_kind = ChartKind::line;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<double> x_ticks;
  std::vector<double> y_ticks;
  LegendPosition legend_position = LegendPosition::inside_top_right;
  Canvas canvas;
  std::uint64_t seed = 0;

  friend bool operator==(const ChartSpec&, const ChartSpec&) = default;
};

// Minimum RGB distance between any two series colours of one chart.
inline constexpr double kMinSeriesColorDistance = 60.0;

// Series colours: pairwise >= 76 apart and >= 150 from pure white and black.
std::span<const ColorRGB> series_palette();

// Throws InvalidArgument naming the first violated invariant.
void validate(const ChartSpec& spec);

nlohmann::ordered_json to_json(const ChartSpec& spec);

// Seeded template sampler standing in for an LLM content step. Equal
// (seed, kind) give equal specs. `canvas` sets the target size.
ChartSpec generate_chart_spec(std::uint64_t seed, ChartKind kind, Canvas canvas = {});

// Affine value <-> pixel mapping for one axis.
struct AxisMap {
  char axis = 'x';  // 'x' or 'y'
  std::pair<double, double> value_range;
  std::pair<double, double> pixel_range;
};

// p_min + (value - v_min) / (v_max - v_min) * (p_max - p_min); extrapolates.
double value_to_pixel(const AxisMap& map, double value);
double pixel_to_value(const AxisMap& map, double pixel);

}  // namespace structlens::chartgen
