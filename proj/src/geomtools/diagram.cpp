#include "structlens/geomtools/diagram.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "structlens/chartgen/font.h"
#include "structlens/core/draw.h"
#include "structlens/core/errors.h"
#include "structlens/core/png_io.h"

namespace structlens::geom {

void validate(const GeomDiagram& d) {
  std::set<std::string> seen;
  for (const auto& p : d.points) {
    if (p.label.empty()) throw InvalidArgument("diagram point with an empty label");
    if (!seen.insert(p.label).second) throw InvalidArgument("duplicate point label " + p.label);
    if (!std::isfinite(p.point.x) || !std::isfinite(p.point.y) || p.point.x < 0 ||
        p.point.y < 0 || p.point.x > d.image.width() - 1 || p.point.y > d.image.height() - 1) {
      throw InvalidArgument("point " + p.label + " lies outside the image");
    }
  }
}

std::vector<ElementAnnotation> diagram_annotations(const std::vector<LabeledPoint>& points) {
  std::vector<ElementAnnotation> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    ElementAnnotation a;
    a.element_id = "point/" + p.label;
    a.category = ElementCategory::geom_point;
    a.point = p.point;
    a.label_text = p.label;
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<LabeledPoint> points_from_annotations(const std::vector<ElementAnnotation>& items) {
  std::vector<LabeledPoint> out;
  for (const auto& a : items) {
    if (a.category != ElementCategory::geom_point || !a.point) continue;
    std::string label = a.label_text.value_or("");
    if (label.empty()) label = std::string(split_element_id(a.element_id).second);
    if (label.starts_with("point/")) label = label.substr(6);
    out.push_back({label, *a.point});
  }
  return out;
}

GeomDiagram load_diagram(const std::filesystem::path& png, const std::filesystem::path& jsonl) {
  GeomDiagram d{read_png(png), points_from_annotations(read_annotations(jsonl))};
  validate(d);
  return d;
}

GeomDiagram make_fixture(int width, int height, std::vector<LabeledPoint> points,
                         const std::vector<std::pair<std::string, std::string>>& segments) {
  GeomDiagram d{RasterImage(width, height), std::move(points)};
  validate(d);
  auto find = [&](const std::string& label) {
    for (const auto& p : d.points) {
      if (p.label == label) return p.point;
    }
    throw InvalidArgument("fixture segment names unknown point " + label);
  };
  for (const auto& [a, b] : segments) draw::segment(d.image, find(a), find(b), colors::kBlack);
  for (const auto& p : d.points) {
    draw::dot(d.image, p.point, 3, colors::kBlack);
    const int tx = std::clamp(static_cast<int>(round_px(p.point.x)) + 4, 0,
                              std::max(0, width - chartgen::font::text_width(p.label, 1)));
    const int ty = std::clamp(static_cast<int>(round_px(p.point.y)) - 14, 0,
                              std::max(0, height - chartgen::font::text_height(1)));
    chartgen::font::draw_text(d.image, tx, ty, p.label, 1, colors::kBlack);
  }
  return d;
}

std::vector<LabeledPoint> import_intergps(const nlohmann::json& record,
                                          std::optional<std::pair<int, int>> bounds) {
  if (!record.is_object() || !record.contains("point_positions") ||
      !record["point_positions"].is_object()) {
    throw SchemaError("record has no point_positions object");
  }
  std::vector<LabeledPoint> out;
  for (const auto& [label, xy] : record["point_positions"].items()) {
    if (!xy.is_array() || xy.size() != 2 || !xy[0].is_number() || !xy[1].is_number()) {
      throw SchemaError("point " + label + " is not an [x, y] pair");
    }
    const Point p{xy[0].get<double>(), xy[1].get<double>()};
    if (bounds && (p.x < 0 || p.y < 0 || p.x > bounds->first - 1 || p.y > bounds->second - 1)) {
      throw SchemaError("point " + label + " lies outside the image");
    }
    out.push_back({label, p});
  }
  std::sort(out.begin(), out.end(),
            [](const LabeledPoint& a, const LabeledPoint& b) { return a.label < b.label; });
  return out;
}

}  // namespace structlens::geom
