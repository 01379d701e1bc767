#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "structlens/core/annotation.h"
#include "structlens/core/raster.h"

namespace structlens::geom {

struct LabeledPoint {
  std::string label;
  Point point;
  friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

struct GeomDiagram {
  RasterImage image;
  std::vector<LabeledPoint> points;
};

// Labels unique and non-empty, points inside the image. Throws InvalidArgument.
void validate(const GeomDiagram& d);

// geom_point annotations with ids "point/<label>".
std::vector<ElementAnnotation> diagram_annotations(const std::vector<LabeledPoint>& points);
std::vector<LabeledPoint> points_from_annotations(const std::vector<ElementAnnotation>& items);

GeomDiagram load_diagram(const std::filesystem::path& png, const std::filesystem::path& jsonl);

// Test fixture: white canvas, solid black segments between the named
// pairs, a dot and a text label at every point.
GeomDiagram make_fixture(int width, int height, std::vector<LabeledPoint> points,
                         const std::vector<std::pair<std::string, std::string>>& segments);

// Reads the "point_positions" object of an Inter-GPS logic-form record
// ({"A": [x, y], ...}). Labels are kept in sorted order. When `bounds` is
// given, points outside it are rejected with SchemaError.
std::vector<LabeledPoint> import_intergps(const nlohmann::json& record,
                                          std::optional<std::pair<int, int>> bounds = std::nullopt);

}  // namespace structlens::geom
