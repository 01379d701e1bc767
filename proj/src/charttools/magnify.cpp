#include <algorithm>
#include <cmath>

#include "common.h"
#include "structlens/charttools/chart_tools.h"
#include "structlens/core/errors.h"

namespace structlens::tools {

namespace {

std::string window_text(char axis, const AxisWindow& w) {
  return std::string(1, axis) + " in [" + format_number(w.v_start) + ", " +
         format_number(w.v_end) + "]";
}

}  // namespace

ToolOutput magnify_region(const RasterImage& image, const MagnifyRequest& request,
                          grounding::Grounder& grounder) {
  if (!request.x && !request.y) throw InvalidArgument("magnify_region needs an x or y window");
  if (!std::isfinite(request.scale) || request.scale < 1.0) {
    throw InvalidArgument("magnification scale must be a finite factor >= 1");
  }
  for (const auto* w : {&request.x, &request.y}) {
    if (*w && (*w)->v_start == (*w)->v_end) throw EmptyWindow("window start equals window end");
  }
  const std::size_t first_call = grounder.calls().size();
  const std::string suffix = detail::panel_suffix(request.panel);

  auto tick_pixel = [&](char axis, double value) {
    const std::string prompt =
        "tick " + format_number(value) + " on the " + std::string(1, axis) + " axis" + suffix;
    const auto p = detail::located_point(
        grounder.locate(image, prompt, grounding::ExpectedKind::point));
    if (!p) throw GroundingMiss("could not ground " + prompt);
    return axis == 'x' ? p->x : p->y;
  };

  std::optional<BBox> extent;
  auto subplot_extent = [&]() -> const BBox& {
    if (!extent) {
      const auto r = grounder.locate(image, detail::subplot_ref(request.panel),
                                     grounding::ExpectedKind::box);
      extent = r.box() ? *r.box() : image.bounds().to_bbox();
    }
    return *extent;
  };

  auto span = [&](char axis, const std::optional<AxisWindow>& window) -> std::pair<int, int> {
    if (window) {
      const double a = tick_pixel(axis, window->v_start);
      const double b = tick_pixel(axis, window->v_end);
      return {static_cast<int>(round_px(std::min(a, b))) - kRulerMargin / 2,
              static_cast<int>(round_px(std::max(a, b))) + kRulerMargin / 2};
    }
    const BBox& e = subplot_extent();
    return axis == 'x' ? std::pair{static_cast<int>(std::floor(e.x1)), static_cast<int>(std::ceil(e.x2))}
                       : std::pair{static_cast<int>(std::floor(e.y1)), static_cast<int>(std::ceil(e.y2))};
  };

  auto [x0, x1] = span('x', request.x);
  auto [y0, y1] = span('y', request.y);
  x0 = std::clamp(x0, 0, image.width());
  x1 = std::clamp(x1, 0, image.width());
  y0 = std::clamp(y0, 0, image.height());
  y1 = std::clamp(y1, 0, image.height());
  const PixelRect region{x0, y0, x1 - x0, y1 - y0};
  if (region.empty()) throw DegenerateRegion("magnification window lies outside the image");

  ToolOutput result{scale_nearest(image.crop(region), request.scale), {}, {},
                    ImageTransform({TransformPiece{region, {0.0, 0.0}, request.scale}}), {}, {}};
  std::string what;
  if (request.x) what = window_text('x', *request.x);
  if (request.y) what += (what.empty() ? "" : ", ") + window_text('y', *request.y);
  result.description = "magnified " + what + " by " + format_number(request.scale) + "x";
  if (request.panel) {
    result.description += " in subplot row " + std::to_string(request.panel->row) + " col " +
                          std::to_string(request.panel->col);
  }
  auto& args = result.provenance.args;
  if (request.x) args["x"] = {request.x->v_start, request.x->v_end};
  if (request.y) args["y"] = {request.y->v_start, request.y->v_end};
  args["scale"] = request.scale;
  if (request.panel) args["panel"] = {request.panel->row, request.panel->col};
  result.provenance.tool = "magnify_region";
  result.provenance.grounding_calls = detail::calls_since(grounder, first_call);
  result.note = "region x=[" + std::to_string(x0) + ", " + std::to_string(x1) + "), y=[" +
                std::to_string(y0) + ", " + std::to_string(y1) + ")";
  return result;
}

}  // namespace structlens::tools
