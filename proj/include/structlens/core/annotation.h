#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "structlens/core/geometry.h"

namespace structlens {

enum class ElementCategory { subplot, legend_region, text_label, axis_tick, geom_point };

std::string_view to_string(ElementCategory c);
ElementCategory category_from_string(std::string_view s);  // throws SchemaError

// Box-scored categories carry a bbox, point-scored ones a point.
bool uses_bbox(ElementCategory c);

struct GridPos {
  int row = 0;  // 1-based
  int col = 0;  // 1-based
  friend bool operator==(const GridPos&, const GridPos&) = default;
};

// Ground truth tying one chart or diagram element to pixel coordinates.
//
// element_id convention: an optional panel prefix "r<row>c<col>/" followed by
// a local id (subplot, legend, legend_entry/<name>, title, x_label, y_label,
// x_tick/<i>, y_tick/<i>, point/<label>). The oracle grounder relies on it.
struct ElementAnnotation {
  std::string element_id;
  ElementCategory category = ElementCategory::subplot;
  std::optional<BBox> bbox;
  std::optional<Point> point;
  std::optional<std::string> label_text;
  std::optional<double> axis_value;
  std::optional<GridPos> grid_pos;

  friend bool operator==(const ElementAnnotation&, const ElementAnnotation&) = default;
};

// Throws SchemaError when the bbox/point presence rule or the grid_pos rule
// is violated.
void validate(const ElementAnnotation& a);

nlohmann::ordered_json to_json(const ElementAnnotation& a);
ElementAnnotation annotation_from_json(const nlohmann::json& j);

// JSON Lines, one annotation per line.
std::string to_jsonl(const std::vector<ElementAnnotation>& items);
std::vector<ElementAnnotation> parse_jsonl(std::string_view text);
void write_annotations(const std::filesystem::path& path, const std::vector<ElementAnnotation>& items);
std::vector<ElementAnnotation> read_annotations(const std::filesystem::path& path);

// Splits "r2c1/title" into {GridPos{2,1}, "title"}; unprefixed ids yield nullopt.
std::pair<std::optional<GridPos>, std::string_view> split_element_id(std::string_view id);
std::string panel_prefix(GridPos pos);

// Shortest decimal that parses back to the same double ("25", "0.5").
std::string format_number(double v);

}  // namespace structlens
