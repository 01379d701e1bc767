#include "structlens/core/annotation.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "structlens/core/errors.h"
#include "structlens/core/png_io.h"

namespace structlens {

std::string_view to_string(ElementCategory c) {
  switch (c) {
    case ElementCategory::subplot: return "subplot";
    case ElementCategory::legend_region: return "legend_region";
    case ElementCategory::text_label: return "text_label";
    case ElementCategory::axis_tick: return "axis_tick";
    case ElementCategory::geom_point: return "geom_point";
  }
  return "unknown";
}

ElementCategory category_from_string(std::string_view s) {
  for (auto c : {ElementCategory::subplot, ElementCategory::legend_region,
                 ElementCategory::text_label, ElementCategory::axis_tick,
                 ElementCategory::geom_point}) {
    if (to_string(c) == s) return c;
  }
  throw SchemaError("unknown element category '" + std::string(s) + "'");
}

bool uses_bbox(ElementCategory c) {
  return c == ElementCategory::subplot || c == ElementCategory::legend_region ||
         c == ElementCategory::text_label;
}

void validate(const ElementAnnotation& a) {
  const std::string where = "annotation '" + a.element_id + "': ";
  if (a.element_id.empty()) throw SchemaError("annotation with empty element_id");
  if (uses_bbox(a.category)) {
    if (!a.bbox || a.point) throw SchemaError(where + "box category requires bbox and no point");
    if (!a.bbox->valid()) throw SchemaError(where + "invalid bbox");
  } else {
    if (!a.point || a.bbox) throw SchemaError(where + "point category requires point and no bbox");
    if (!std::isfinite(a.point->x) || !std::isfinite(a.point->y)) {
      throw SchemaError(where + "non-finite point");
    }
  }
  if (a.grid_pos && a.category != ElementCategory::subplot) {
    throw SchemaError(where + "grid_pos is only allowed on subplot annotations");
  }
  if (a.grid_pos && (a.grid_pos->row < 1 || a.grid_pos->col < 1)) {
    throw SchemaError(where + "grid_pos is 1-based");
  }
}

nlohmann::ordered_json to_json(const ElementAnnotation& a) {
  nlohmann::ordered_json j;
  j["element_id"] = a.element_id;
  j["category"] = std::string(to_string(a.category));
  if (a.bbox) j["bbox"] = {a.bbox->x1, a.bbox->y1, a.bbox->x2, a.bbox->y2};
  if (a.point) j["point"] = {a.point->x, a.point->y};
  if (a.label_text) j["label_text"] = *a.label_text;
  if (a.axis_value) j["axis_value"] = *a.axis_value;
  if (a.grid_pos) j["grid_pos"] = {a.grid_pos->row, a.grid_pos->col};
  return j;
}

ElementAnnotation annotation_from_json(const nlohmann::json& j) {
  try {
    ElementAnnotation a;
    a.element_id = j.at("element_id").get<std::string>();
    a.category = category_from_string(j.at("category").get<std::string>());
    if (auto it = j.find("bbox"); it != j.end() && !it->is_null()) {
      const auto v = it->get<std::vector<double>>();
      if (v.size() != 4) throw SchemaError("bbox must have 4 numbers");
      a.bbox = BBox{v[0], v[1], v[2], v[3]};
    }
    if (auto it = j.find("point"); it != j.end() && !it->is_null()) {
      const auto v = it->get<std::vector<double>>();
      if (v.size() != 2) throw SchemaError("point must have 2 numbers");
      a.point = Point{v[0], v[1]};
    }
    if (auto it = j.find("label_text"); it != j.end() && !it->is_null()) {
      a.label_text = it->get<std::string>();
    }
    if (auto it = j.find("axis_value"); it != j.end() && !it->is_null()) {
      a.axis_value = it->get<double>();
    }
    if (auto it = j.find("grid_pos"); it != j.end() && !it->is_null()) {
      const auto v = it->get<std::vector<int>>();
      if (v.size() != 2) throw SchemaError("grid_pos must have 2 integers");
      a.grid_pos = GridPos{v[0], v[1]};
    }
    validate(a);
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed annotation: ") + e.what());
  }
}

std::string to_jsonl(const std::vector<ElementAnnotation>& items) {
  std::string out;
  for (const auto& a : items) {
    out += to_json(a).dump();
    out += '\n';
  }
  return out;
}

std::vector<ElementAnnotation> parse_jsonl(std::string_view text) {
  std::vector<ElementAnnotation> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(annotation_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_annotations(const std::filesystem::path& path,
                       const std::vector<ElementAnnotation>& items) {
  write_text(path, to_jsonl(items));
}

std::vector<ElementAnnotation> read_annotations(const std::filesystem::path& path) {
  try {
    return parse_jsonl(read_text(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::pair<std::optional<GridPos>, std::string_view> split_element_id(std::string_view id) {
  const auto slash = id.find('/');
  if (slash == std::string_view::npos || id.empty() || id[0] != 'r') return {std::nullopt, id};
  const auto prefix = id.substr(0, slash);
  const auto c = prefix.find('c');
  if (c == std::string_view::npos) return {std::nullopt, id};
  GridPos pos;
  const auto row = prefix.substr(1, c - 1);
  const auto col = prefix.substr(c + 1);
  auto r1 = std::from_chars(row.data(), row.data() + row.size(), pos.row);
  auto r2 = std::from_chars(col.data(), col.data() + col.size(), pos.col);
  if (r1.ec != std::errc{} || r1.ptr != row.data() + row.size() || r2.ec != std::errc{} ||
      r2.ptr != col.data() + col.size() || row.empty() || col.empty()) {
    return {std::nullopt, id};
  }
  return {pos, id.substr(slash + 1)};
}

std::string panel_prefix(GridPos pos) {
  return "r" + std::to_string(pos.row) + "c" + std::to_string(pos.col) + "/";
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace structlens
