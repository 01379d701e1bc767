#include <algorithm>
#include <cmath>

#include "common.h"
#include "structlens/charttools/chart_tools.h"
#include "structlens/core/errors.h"

namespace structlens::tools {

double interpolate_tick_pixel(std::span<const std::pair<double, double>> ticks, double value) {
  std::vector<std::pair<double, double>> t(ticks.begin(), ticks.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end(),
                      [](const auto& a, const auto& b) { return a.first == b.first; }),
          t.end());
  for (const auto& [v, px] : t) {
    if (v == value) return px;
  }
  if (t.size() < 2) throw GroundingMiss("fewer than two ticks could be grounded");

  auto lerp = [value](const std::pair<double, double>& a, const std::pair<double, double>& b) {
    return a.second + (value - a.first) / (b.first - a.first) * (b.second - a.second);
  };
  const double lo = t.front().first;
  const double hi = t.back().first;
  if (value > lo && value < hi) {
    const auto upper = std::upper_bound(t.begin(), t.end(), value,
                                        [](double v, const auto& e) { return v < e.first; });
    return lerp(*(upper - 1), *upper);
  }
  const double reach = kMaxExtrapolation * (hi - lo);
  if (value < lo) {
    if (lo - value > reach) throw GroundingMiss("value lies too far below the grounded ticks");
    return lerp(t[0], t[1]);
  }
  if (value - hi > reach) throw GroundingMiss("value lies too far above the grounded ticks");
  return lerp(t[t.size() - 2], t[t.size() - 1]);
}

ToolOutput add_auxiliary_line(const RasterImage& image, const AuxiliaryLineRequest& request,
                              grounding::Grounder& grounder) {
  if (request.axis != 'x' && request.axis != 'y') throw InvalidArgument("axis must be x or y");
  if (!std::isfinite(request.value)) throw InvalidArgument("line value must be finite");
  const std::size_t first_call = grounder.calls().size();
  const std::string suffix = detail::panel_suffix(request.panel);
  const std::string axis(1, request.axis);

  auto ground_tick = [&](double v) -> std::optional<double> {
    const auto p = detail::located_point(grounder.locate(
        image, "tick " + format_number(v) + " on the " + axis + " axis" + suffix,
        grounding::ExpectedKind::point));
    if (!p) return std::nullopt;
    return request.axis == 'x' ? p->x : p->y;
  };

  std::vector<std::pair<double, double>> resolved;
  if (auto px = ground_tick(request.value)) {
    resolved.emplace_back(request.value, *px);
  } else {
    for (double v : request.ref_ticks) {
      if (v == request.value) continue;
      if (auto tick = ground_tick(v)) resolved.emplace_back(v, *tick);
    }
    if (resolved.size() < 2) {
      throw GroundingMiss("fewer than two ticks on the " + axis + " axis could be grounded");
    }
  }
  const double pixel = interpolate_tick_pixel(resolved, request.value);
  const auto line = round_px(pixel);
  const int extent = request.axis == 'x' ? image.width() : image.height();
  if (line < 0 || line >= extent) throw DegenerateRegion("auxiliary line falls outside the image");

  RasterImage out = image;
  const double c = static_cast<double>(line);
  if (request.axis == 'y') {
    draw::segment(out, {0.0, c}, {static_cast<double>(out.width()), c}, request.style.color,
                  request.style.dash);
  } else {
    draw::segment(out, {c, 0.0}, {c, static_cast<double>(out.height())}, request.style.color,
                  request.style.dash);
  }

  ToolOutput result{std::move(out), {}, {}, ImageTransform::identity(image.width(), image.height()),
                    {}, {}};
  result.description = "auxiliary line at " + axis + " = " + format_number(request.value);
  result.note = (request.axis == 'y' ? "drawn at pixel row " : "drawn at pixel column ") +
                std::to_string(line);
  auto& args = result.provenance.args;
  args["axis"] = axis;
  args["value"] = request.value;
  if (!request.ref_ticks.empty()) args["ref_ticks"] = request.ref_ticks;
  if (request.panel) args["panel"] = {request.panel->row, request.panel->col};
  result.provenance.tool = "add_auxiliary_line";
  result.provenance.grounding_calls = detail::calls_since(grounder, first_call);
  return result;
}

}  // namespace structlens::tools
