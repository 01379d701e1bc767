#include "structlens/geomtools/constructions.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "structlens/chartgen/font.h"
#include "structlens/core/errors.h"

namespace structlens::geom {

namespace {

Point ground_point(const RasterImage& image, std::string_view label, grounding::Grounder& g) {
  const auto r = g.locate(image, "point " + std::string(label), grounding::ExpectedKind::point);
  if (const auto* p = r.point()) return *p;
  if (const auto* b = r.box()) return {(b->x1 + b->x2) / 2.0, (b->y1 + b->y2) / 2.0};
  throw GroundingMiss("point " + std::string(label) + " not found");
}

std::vector<grounding::GroundingCall> calls_since(const grounding::Grounder& g, std::size_t first) {
  const auto& all = g.calls();
  return {all.begin() + static_cast<std::ptrdiff_t>(first), all.end()};
}

std::string coord_text(Point p) {
  auto r = [](double v) { return format_number(std::round(v * 1000.0) / 1000.0); };
  return "(" + r(p.x) + ", " + r(p.y) + ")";
}

// Label for a constructed point: the first letter from E on that is neither
// one of `taken` nor already groundable in the image.
std::string free_label(const RasterImage& image, std::initializer_list<std::string_view> taken,
                       grounding::Grounder& g) {
  for (char c = 'E'; c <= 'Z'; ++c) {
    const std::string label(1, c);
    if (std::find(taken.begin(), taken.end(), label) != taken.end()) continue;
    const auto r = g.locate(image, "point " + label, grounding::ExpectedKind::point);
    if (!r.found()) return label;
  }
  return "P'";
}

void draw_label(RasterImage& img, Point at, const std::string& label, ColorRGB color) {
  const int w = chartgen::font::text_width(label, 1);
  const int h = chartgen::font::text_height(1);
  const int x = std::clamp(static_cast<int>(round_px(at.x)) + 4, 0, std::max(0, img.width() - w));
  const int y = std::clamp(static_cast<int>(round_px(at.y)) + 4, 0, std::max(0, img.height() - h));
  chartgen::font::draw_text(img, x, y, label, 1, color);
}

LineRef check_line(const LineRef& line) {
  if (line.a_label.empty() || line.b_label.empty() || line.a_label == line.b_label) {
    throw InvalidArgument("a line needs two distinct point labels");
  }
  return line;
}

}  // namespace

tools::ToolOutput connect_points(const RasterImage& image, std::string_view a_label,
                                 std::string_view b_label, grounding::Grounder& grounder,
                                 const tools::LineStyle& style) {
  const std::size_t first_call = grounder.calls().size();
  const Point a = ground_point(image, a_label, grounder);
  const Point b = ground_point(image, b_label, grounder);
  if (distance(a, b) < kMinPointSeparation) {
    throw CoincidentPoints("points " + std::string(a_label) + " and " + std::string(b_label) +
                           " are less than 2 px apart");
  }
  RasterImage out = image;
  draw::segment(out, a, b, style.color, style.dash);
  draw::dot(out, a, kEndpointDot, style.color);
  draw::dot(out, b, kEndpointDot, style.color);

  tools::ToolOutput result{std::move(out), {}, {},
                           ImageTransform::identity(image.width(), image.height()), {}, {}};
  result.description =
      "connected points " + std::string(a_label) + " and " + std::string(b_label);
  result.note = "segment length " + format_number(std::round(distance(a, b) * 1000.0) / 1000.0) + " px";
  result.provenance.tool = "connect_points";
  result.provenance.args = {{"a", std::string(a_label)}, {"b", std::string(b_label)}};
  result.provenance.grounding_calls = calls_since(grounder, first_call);
  return result;
}

Point foot_of_perpendicular(Point p, Point a, Point b) {
  if (a == b) throw DegenerateLine("reference line endpoints coincide");
  const Point d = b - a;
  const double t = dot(p - a, d) / dot(d, d);
  return a + t * d;
}

PerpendicularResult construct_perpendicular(const RasterImage& image, std::string_view p_label,
                                            const LineRef& line, grounding::Grounder& grounder,
                                            const tools::LineStyle& style) {
  check_line(line);
  const std::size_t first_call = grounder.calls().size();
  const Point p = ground_point(image, p_label, grounder);
  const Point a = ground_point(image, line.a_label, grounder);
  const Point b = ground_point(image, line.b_label, grounder);
  if (distance(a, b) < kMinPointSeparation) {
    throw DegenerateLine("points " + line.a_label + " and " + line.b_label + " coincide");
  }
  const Point foot = foot_of_perpendicular(p, a, b);
  const std::string line_name = line.a_label + line.b_label;

  PerpendicularResult res{tools::ToolOutput{image, {}, {},
                                            ImageTransform::identity(image.width(), image.height()),
                                            {}, {}},
                          foot, {}, false};
  auto& out = res.output;
  const double len = distance(p, foot);
  if (len < 1.0) {
    res.zero_length = true;
    out.description = "perpendicular from " + std::string(p_label) + " to line " + line_name +
                      " has zero length";
    out.note = "point " + std::string(p_label) + " lies on line " + line_name + "; foot " +
               coord_text(foot);
  } else {
    const Point beyond = foot + (kPerpendicularOvershoot / len) * (foot - p);
    draw::segment(out.image, p, beyond, style.color, style.dash);
    draw::dot(out.image, foot, kEndpointDot, style.color);
    res.foot_label = free_label(image, {p_label, line.a_label, line.b_label}, grounder);
    draw_label(out.image, foot, res.foot_label, style.color);
    ElementAnnotation added;
    added.element_id = "point/" + res.foot_label;
    added.category = ElementCategory::geom_point;
    added.point = foot;
    added.label_text = res.foot_label;
    out.added.push_back(std::move(added));
    out.description = "perpendicular from " + std::string(p_label) + " to line " + line_name +
                      " with foot " + res.foot_label;
    out.note = "foot " + res.foot_label + " = " + coord_text(foot) + ", length " +
               format_number(std::round(len * 1000.0) / 1000.0) + " px";
  }
  out.provenance.tool = "construct_perpendicular";
  out.provenance.args = {{"point", std::string(p_label)}, {"a", line.a_label}, {"b", line.b_label}};
  out.provenance.grounding_calls = calls_since(grounder, first_call);
  return res;
}

std::optional<std::pair<double, double>> clip_line(Point p, Point d, const BBox& box) {
  if (d.x == 0.0 && d.y == 0.0) return std::nullopt;
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  const double pk[4] = {-d.x, d.x, -d.y, d.y};
  const double qk[4] = {p.x - box.x1, box.x2 - p.x, p.y - box.y1, box.y2 - p.y};
  for (int k = 0; k < 4; ++k) {
    if (pk[k] == 0.0) {
      if (qk[k] < 0.0) return std::nullopt;
      continue;
    }
    const double r = qk[k] / pk[k];
    if (pk[k] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
  }
  if (t0 > t1) return std::nullopt;
  return std::pair{t0, t1};
}

ParallelResult construct_parallel(const RasterImage& image, std::string_view p_label,
                                  const LineRef& line, grounding::Grounder& grounder,
                                  const tools::LineStyle& style) {
  check_line(line);
  const std::size_t first_call = grounder.calls().size();
  const Point p = ground_point(image, p_label, grounder);
  const Point a = ground_point(image, line.a_label, grounder);
  const Point b = ground_point(image, line.b_label, grounder);
  if (distance(a, b) < kMinPointSeparation) {
    throw DegenerateLine("points " + line.a_label + " and " + line.b_label + " coincide");
  }
  const Point d = b - a;
  const BBox centres{0.0, 0.0, image.width() - 1.0, image.height() - 1.0};
  const auto span = clip_line(p, d, centres);
  if (!span) throw DegenerateRegion("parallel line misses the image");

  ParallelResult res{tools::ToolOutput{image, {}, {},
                                       ImageTransform::identity(image.width(), image.height()),
                                       {}, {}},
                     d, p + span->first * d, p + span->second * d};
  auto& out = res.output;
  draw::segment(out.image, res.start, res.end, style.color, style.dash);
  // The end pixel is skipped by the tracer; close the line at the border.
  if (style.dash.is_solid()) out.image.plot(static_cast<int>(round_px(res.end.x)),
                                            static_cast<int>(round_px(res.end.y)), style.color);
  const std::string line_name = line.a_label + line.b_label;
  out.description = "line through " + std::string(p_label) + " parallel to " + line_name;
  out.note = "drawn from " + coord_text(res.start) + " to " + coord_text(res.end);
  out.provenance.tool = "construct_parallel";
  out.provenance.args = {{"point", std::string(p_label)}, {"a", line.a_label}, {"b", line.b_label}};
  out.provenance.grounding_calls = calls_since(grounder, first_call);
  return res;
}

}  // namespace structlens::geom
