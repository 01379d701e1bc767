#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "structlens/charttools/chart_tools.h"

namespace structlens::geom {

inline constexpr double kMinPointSeparation = 2.0;
inline constexpr int kEndpointDot = 3;
inline constexpr double kPerpendicularOvershoot = 8.0;

struct LineRef {
  std::string a_label;
  std::string b_label;
};

// Dashed segment between two grounded points, 3 px dots at both ends.
tools::ToolOutput connect_points(const RasterImage& image, std::string_view a_label,
                                 std::string_view b_label, grounding::Grounder& grounder,
                                 const tools::LineStyle& style = {});

// Orthogonal projection of p onto the infinite line ab. Throws DegenerateLine
// when a == b.
Point foot_of_perpendicular(Point p, Point a, Point b);

struct PerpendicularResult {
  tools::ToolOutput output;
  Point foot;
  std::string foot_label;  // empty for a zero-length construction
  bool zero_length = false;
};

// Draws P -> foot plus a short overshoot past the foot and labels the foot
// with the first free letter from E on. When P is within 1 px of the line
// nothing is drawn.
PerpendicularResult construct_perpendicular(const RasterImage& image, std::string_view p_label,
                                            const LineRef& line, grounding::Grounder& grounder,
                                            const tools::LineStyle& style = {});

struct ParallelResult {
  tools::ToolOutput output;
  Point direction;  // exactly b - a
  Point start;
  Point end;
};

// Line through P along b - a, clipped to the image's pixel-centre box.
ParallelResult construct_parallel(const RasterImage& image, std::string_view p_label,
                                  const LineRef& line, grounding::Grounder& grounder,
                                  const tools::LineStyle& style = {});

// Liang-Barsky clip of the infinite line p + t*d against `box`. Returns the
// parameter interval, or nullopt when the line misses the box or d is zero.
std::optional<std::pair<double, double>> clip_line(Point p, Point d, const BBox& box);

}  // namespace structlens::geom
