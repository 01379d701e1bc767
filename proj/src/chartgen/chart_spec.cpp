#include "structlens/chartgen/chart_spec.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "structlens/chartgen/sampler.h"
#include "structlens/core/errors.h"

namespace structlens::chartgen {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string_view to_string(ChartKind k) {
  switch (k) {
    case ChartKind::line: return "line";
    case ChartKind::bar: return "bar";
    case ChartKind::scatter: return "scatter";
  }
  return "line";
}

std::string_view to_string(LegendPosition p) {
  switch (p) {
    case LegendPosition::inside_top_right: return "inside_top_right";
    case LegendPosition::right_of_axes: return "right_of_axes";
    case LegendPosition::below_axes: return "below_axes";
  }
  return "inside_top_right";
}

ChartKind chart_kind_from_string(std::string_view s) {
  for (auto k : {ChartKind::line, ChartKind::bar, ChartKind::scatter}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown chart kind '" + std::string(s) + "'");
}

std::span<const ColorRGB> series_palette() {
  static constexpr std::array<ColorRGB, 11> kPalette = {{
      {31, 119, 180}, {255, 127, 14}, {44, 160, 44},  {214, 39, 40},
      {148, 103, 189}, {140, 86, 75}, {227, 119, 194}, {23, 190, 207},
      {188, 189, 34}, {0, 0, 160},   {120, 120, 0},
  }};
  return kPalette;
}

void validate(const ChartSpec& spec) {
  if (spec.series.empty()) throw InvalidArgument("chart needs at least one series");
  for (const auto* ticks : {&spec.x_ticks, &spec.y_ticks}) {
    if (ticks->size() < 2) throw InvalidArgument("each axis needs at least two ticks");
    for (std::size_t i = 1; i < ticks->size(); ++i) {
      if (!((*ticks)[i] > (*ticks)[i - 1])) {
        throw InvalidArgument("tick values must be strictly increasing");
      }
    }
  }
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    if (spec.series[i].name.empty()) throw InvalidArgument("series name must be non-empty");
    for (std::size_t j = i + 1; j < spec.series.size(); ++j) {
      if (color_distance(spec.series[i].color, spec.series[j].color) < kMinSeriesColorDistance) {
        throw InvalidArgument("series colours '" + spec.series[i].name + "' and '" +
                              spec.series[j].name + "' are too close");
      }
      if (spec.series[i].name == spec.series[j].name) {
        throw InvalidArgument("duplicate series name '" + spec.series[i].name + "'");
      }
    }
  }
  if (spec.canvas.width < 1 || spec.canvas.height < 1) throw InvalidArgument("empty canvas");
}

nlohmann::ordered_json to_json(const ChartSpec& spec) {
  nlohmann::ordered_json j;
  j["chart_kind"] = std::string(to_string(spec.chart_kind));
  j["title"] = spec.title;
  j["x_label"] = spec.x_label;
  j["y_label"] = spec.y_label;
  auto series = nlohmann::ordered_json::array();
  for (const auto& s : spec.series) {
    nlohmann::ordered_json js;
    js["name"] = s.name;
    js["color"] = {s.color.r, s.color.g, s.color.b};
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : s.points) pts.push_back({p.x, p.y});
    js["points"] = std::move(pts);
    series.push_back(std::move(js));
  }
  j["series"] = std::move(series);
  j["x_ticks"] = spec.x_ticks;
  j["y_ticks"] = spec.y_ticks;
  j["legend_position"] = std::string(to_string(spec.legend_position));
  j["canvas"] = {spec.canvas.width, spec.canvas.height};
  j["seed"] = spec.seed;
  return j;
}

namespace {

constexpr std::array<std::string_view, 10> kMetrics = {
    "Revenue", "Throughput", "Latency", "Yield", "Accuracy",
    "Rainfall", "Output",     "Demand",  "Load",  "Growth"};
constexpr std::array<std::string_view, 8> kSubjects = {
    "by Region", "per Team", "by Site", "per Model",
    "by Sensor", "per Plant", "by Batch", "per Store"};
constexpr std::array<std::string_view, 6> kXLabels = {"Year", "Month", "Step", "Week", "Trial",
                                                      "Time (s)"};
constexpr std::array<std::string_view, 7> kYLabels = {"Value", "Count", "Rate (%)", "Units",
                                                      "Score", "Volume", "Index"};
constexpr std::array<std::string_view, 4> kNameStyles = {"Group", "Series", "Set", "Lab"};
constexpr std::array<std::string_view, 8> kRegionNames = {"North", "South", "East", "West",
                                                          "Alpha", "Beta",  "Gamma", "Delta"};

std::vector<double> make_ticks(double start, double step, int count) {
  std::vector<double> ticks;
  ticks.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) ticks.push_back(start + step * i);
  return ticks;
}

// Keeps sampled values on a 0.1 grid so they print compactly.
double snap(double v) { return std::round(v * 10.0) / 10.0; }

}  // namespace

ChartSpec generate_chart_spec(std::uint64_t seed, ChartKind kind, Canvas canvas) {
  Sampler rng(mix_seed(seed, static_cast<std::uint64_t>(kind) + 101));
  ChartSpec spec;
  spec.chart_kind = kind;
  spec.seed = seed;
  spec.canvas = canvas;

  spec.title = std::string(rng.pick<std::string_view>(kMetrics)) + " " +
               std::string(rng.pick<std::string_view>(kSubjects));
  spec.x_label = std::string(rng.pick<std::string_view>(kXLabels));
  spec.y_label = std::string(rng.pick<std::string_view>(kYLabels));

  static constexpr std::array<double, 4> kXSteps = {1, 2, 5, 10};
  static constexpr std::array<double, 8> kYSteps = {1, 2, 5, 10, 20, 25, 50, 100};
  const double x_step = rng.pick<double>(kXSteps);
  const double y_step = rng.pick<double>(kYSteps);
  const int y_count = static_cast<int>(rng.uniform_int(4, 7));
  const double y_start = kind == ChartKind::bar ? 0.0 : y_step * static_cast<double>(rng.uniform_int(0, 3));
  spec.y_ticks = make_ticks(y_start, y_step, y_count);

  int x_count = static_cast<int>(rng.uniform_int(5, 8));
  const double x_start = x_step * static_cast<double>(rng.uniform_int(0, 4));
  spec.x_ticks = make_ticks(x_start, x_step, x_count);

  const int n_series = static_cast<int>(rng.uniform_int(1, 3));
  std::vector<ColorRGB> palette(series_palette().begin(), series_palette().end());
  rng.shuffle(palette);
  const auto style = rng.pick<std::string_view>(kNameStyles);
  const bool regions = rng.uniform_int(0, 1) == 1;
  std::vector<std::string_view> region_names(kRegionNames.begin(), kRegionNames.end());
  rng.shuffle(region_names);

  const double y_lo = spec.y_ticks.front();
  const double y_hi = spec.y_ticks.back();
  const double y_span = y_hi - y_lo;
  for (int s = 0; s < n_series; ++s) {
    Series series;
    series.name = regions ? std::string(region_names[static_cast<std::size_t>(s)])
                          : std::string(style) + " " + static_cast<char>('A' + s);
    series.color = palette[static_cast<std::size_t>(s)];
    switch (kind) {
      case ChartKind::line: {
        // Two samples per tick interval.
        for (int i = 0; i <= 2 * (x_count - 1); ++i) {
          series.points.push_back({x_start + x_step * 0.5 * i,
                                   snap(rng.uniform_real(y_lo + 0.05 * y_span, y_hi - 0.05 * y_span))});
        }
        break;
      }
      case ChartKind::bar: {
        // Bars sit on the interior ticks so the outer ticks bound the groups.
        for (int i = 1; i + 1 < x_count; ++i) {
          series.points.push_back({x_start + x_step * i,
                                   snap(rng.uniform_real(y_lo + 0.1 * y_span, y_hi - 0.05 * y_span))});
        }
        break;
      }
      case ChartKind::scatter: {
        const int n = static_cast<int>(rng.uniform_int(10, 25));
        const double x_lo = spec.x_ticks.front();
        const double x_span = spec.x_ticks.back() - x_lo;
        for (int i = 0; i < n; ++i) {
          series.points.push_back({snap(rng.uniform_real(x_lo + 0.03 * x_span, x_lo + 0.97 * x_span)),
                                   snap(rng.uniform_real(y_lo + 0.05 * y_span, y_hi - 0.05 * y_span))});
        }
        break;
      }
    }
    spec.series.push_back(std::move(series));
  }

  static constexpr std::array<LegendPosition, 3> kLegend = {
      LegendPosition::inside_top_right, LegendPosition::right_of_axes, LegendPosition::below_axes};
  spec.legend_position = rng.pick<LegendPosition>(kLegend);
  validate(spec);
  return spec;
}

double value_to_pixel(const AxisMap& map, double value) {
  const auto [v_min, v_max] = map.value_range;
  const auto [p_min, p_max] = map.pixel_range;
  return p_min + (value - v_min) / (v_max - v_min) * (p_max - p_min);
}

double pixel_to_value(const AxisMap& map, double pixel) {
  const auto [v_min, v_max] = map.value_range;
  const auto [p_min, p_max] = map.pixel_range;
  return v_min + (pixel - p_min) / (p_max - p_min) * (v_max - v_min);
}

}  // namespace structlens::chartgen
