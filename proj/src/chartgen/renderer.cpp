#include "structlens/chartgen/renderer.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "structlens/chartgen/font.h"
#include "structlens/core/draw.h"
#include "structlens/core/errors.h"

namespace structlens::chartgen {

namespace {

constexpr int kOuter = 8;
constexpr int kTickLen = 5;
constexpr int kTickGap = 3;
constexpr int kLabelGap = 6;
constexpr int kMinPlot = 60;

constexpr int kLegendPad = 5;
constexpr int kIconW = 16;
constexpr int kIconH = 8;
constexpr int kIconGap = 4;
constexpr int kEntryRow = 13;
constexpr int kEntrySpacing = 12;

struct LegendGeometry {
  int width = 0;
  int height = 0;
};

LegendGeometry measure_legend(const ChartSpec& spec) {
  const int text_h = font::text_height(1);
  if (spec.legend_position == LegendPosition::below_axes) {
    int w = 0;
    for (const auto& s : spec.series) w += kIconW + kIconGap + font::text_width(s.name, 1);
    w += kEntrySpacing * static_cast<int>(spec.series.size() - 1);
    return {w + 2 * kLegendPad + 2, text_h + 2 * kLegendPad + 2};
  }
  int text_w = 0;
  for (const auto& s : spec.series) text_w = std::max(text_w, font::text_width(s.name, 1));
  const int n = static_cast<int>(spec.series.size());
  return {kIconW + kIconGap + text_w + 2 * kLegendPad + 2,
          n * kEntryRow - (kEntryRow - text_h) + 2 * kLegendPad + 2};
}

BBox rect_box(const PixelRect& r) { return r.to_bbox(); }

ElementAnnotation box_annotation(std::string id, ElementCategory cat, const PixelRect& r) {
  ElementAnnotation a;
  a.element_id = std::move(id);
  a.category = cat;
  a.bbox = rect_box(r);
  return a;
}

PixelRect unite(const PixelRect& a, const PixelRect& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const int x1 = std::min(a.x, b.x);
  const int y1 = std::min(a.y, b.y);
  const int x2 = std::max(a.right(), b.right());
  const int y2 = std::max(a.bottom(), b.bottom());
  return {x1, y1, x2 - x1, y2 - y1};
}

std::string tick_text(double v) { return format_number(v); }

}  // namespace

RenderResult render_chart(const ChartSpec& spec) {
  validate(spec);
  const int W = spec.canvas.width;
  const int H = spec.canvas.height;
  const int text_h = font::text_height(1);

  // Title falls back to the small size when the large one does not fit.
  int title_scale = 2;
  if (font::text_width(spec.title, 2) > W - 2 * kOuter) title_scale = 1;
  if (font::text_width(spec.title, title_scale) > W - 2 * kOuter) {
    throw CanvasTooSmall("title '" + spec.title + "' does not fit a " + std::to_string(W) +
                         " px wide canvas");
  }

  const LegendGeometry legend = measure_legend(spec);
  int y_tick_w = 0;
  for (double v : spec.y_ticks) y_tick_w = std::max(y_tick_w, font::text_width(tick_text(v), 1));
  const int first_x_half = font::text_width(tick_text(spec.x_ticks.front()), 1) / 2 + 1;
  const int last_x_half = font::text_width(tick_text(spec.x_ticks.back()), 1) / 2 + 1;

  const int top = kOuter + font::text_height(title_scale) + 8;
  int left = kOuter + text_h + kLabelGap + y_tick_w + kTickGap + kTickLen;
  left = std::max(left, kOuter + first_x_half);
  int right = W - 1 - kOuter - last_x_half;
  if (spec.legend_position == LegendPosition::right_of_axes) {
    right = std::min(right, W - 1 - kOuter - legend.width - 10);
  }
  int bottom = H - 1 - kOuter - text_h - kLabelGap - text_h - kTickGap - kTickLen;
  if (spec.legend_position == LegendPosition::below_axes) bottom -= legend.height + 8;

  if (right - left < kMinPlot || bottom - top < kMinPlot) {
    throw CanvasTooSmall("plot area would be " + std::to_string(right - left) + "x" +
                         std::to_string(bottom - top) + " px on a " + std::to_string(W) + "x" +
                         std::to_string(H) + " canvas");
  }
  if (spec.legend_position == LegendPosition::inside_top_right &&
      (legend.width > (right - left) - 12 || legend.height > (bottom - top) - 12)) {
    throw CanvasTooSmall("legend does not fit inside the axes");
  }
  if (spec.legend_position == LegendPosition::below_axes && legend.width > W - 2 * kOuter) {
    throw CanvasTooSmall("legend does not fit below the axes");
  }
  if (spec.legend_position == LegendPosition::right_of_axes &&
      legend.height > H - top - kOuter) {
    throw CanvasTooSmall("legend does not fit beside the axes");
  }

  RenderResult out{RasterImage(W, H), {}, {}, {}, {left, top, right - left + 1, bottom - top + 1}};
  RasterImage& img = out.image;

  const AxisMap xmap{'x', {spec.x_ticks.front(), spec.x_ticks.back()}, {double(left), double(right)}};
  const AxisMap ymap{'y', {spec.y_ticks.front(), spec.y_ticks.back()}, {double(bottom), double(top)}};
  out.axis_maps = {xmap, ymap};

  std::vector<ElementAnnotation> ticks;
  PixelRect subplot_extent = out.plot_rect;

  // Axes.
  for (int x = left; x <= right; ++x) img.set(x, bottom, colors::kBlack);
  for (int y = top; y <= bottom; ++y) img.set(left, y, colors::kBlack);

  for (std::size_t i = 0; i < spec.x_ticks.size(); ++i) {
    const double v = spec.x_ticks[i];
    const double px = value_to_pixel(xmap, v);
    const int ix = static_cast<int>(round_px(px));
    for (int d = 1; d <= kTickLen; ++d) img.set(ix, bottom + d, colors::kBlack);
    const std::string label = tick_text(v);
    const int lw = font::text_width(label, 1);
    const auto ink = font::draw_text(img, ix - lw / 2, bottom + kTickLen + kTickGap, label, 1,
                                     colors::kBlack);
    subplot_extent = unite(subplot_extent, ink);
    subplot_extent = unite(subplot_extent, PixelRect{ix, bottom, 1, kTickLen + 1});
    ElementAnnotation a;
    a.element_id = "x_tick/" + std::to_string(i);
    a.category = ElementCategory::axis_tick;
    a.point = Point{px, double(bottom)};
    a.axis_value = v;
    a.label_text = label;
    ticks.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < spec.y_ticks.size(); ++i) {
    const double v = spec.y_ticks[i];
    const double py = value_to_pixel(ymap, v);
    const int iy = static_cast<int>(round_px(py));
    for (int d = 1; d <= kTickLen; ++d) img.set(left - d, iy, colors::kBlack);
    const std::string label = tick_text(v);
    const int lw = font::text_width(label, 1);
    const auto ink = font::draw_text(img, left - kTickLen - kTickGap - lw, iy - text_h / 2, label,
                                     1, colors::kBlack);
    subplot_extent = unite(subplot_extent, ink);
    subplot_extent = unite(subplot_extent, PixelRect{left - kTickLen, iy, kTickLen + 1, 1});
    ElementAnnotation a;
    a.element_id = "y_tick/" + std::to_string(i);
    a.category = ElementCategory::axis_tick;
    a.point = Point{double(left), py};
    a.axis_value = v;
    a.label_text = label;
    ticks.push_back(std::move(a));
  }

  // Data, clipped inside the axis lines so they stay intact.
  const PixelRect clip{left + 1, top, right - left, bottom - top};
  std::vector<std::int8_t> owner(static_cast<std::size_t>(W) * static_cast<std::size_t>(H), -1);
  auto own = [&](int x, int y, int s) {
    owner[static_cast<std::size_t>(y) * static_cast<std::size_t>(W) + static_cast<std::size_t>(x)] =
        static_cast<std::int8_t>(s);
  };
  auto paint_rect = [&](PixelRect r, int s) {
    const int x1 = std::max(r.x, clip.x);
    const int y1 = std::max(r.y, clip.y);
    const int x2 = std::min(r.right(), clip.right());
    const int y2 = std::min(r.bottom(), clip.bottom());
    for (int y = y1; y < y2; ++y) {
      for (int x = x1; x < x2; ++x) {
        img.set(x, y, spec.series[static_cast<std::size_t>(s)].color);
        own(x, y, s);
      }
    }
  };

  const int n_series = static_cast<int>(spec.series.size());
  const double x_step_px =
      (right - left) / static_cast<double>(std::max<std::size_t>(1, spec.x_ticks.size() - 1));
  for (int s = 0; s < n_series; ++s) {
    const auto& series = spec.series[static_cast<std::size_t>(s)];
    switch (spec.chart_kind) {
      case ChartKind::line: {
        for (std::size_t i = 0; i + 1 < series.points.size(); ++i) {
          const auto& p = series.points[i];
          const auto& q = series.points[i + 1];
          draw::thick_line(img, static_cast<int>(round_px(value_to_pixel(xmap, p.x))),
                           static_cast<int>(round_px(value_to_pixel(ymap, p.y))),
                           static_cast<int>(round_px(value_to_pixel(xmap, q.x))),
                           static_cast<int>(round_px(value_to_pixel(ymap, q.y))), 2, series.color,
                           clip, [&](int x, int y) { own(x, y, s); });
        }
        break;
      }
      case ChartKind::scatter: {
        for (const auto& p : series.points) {
          const int cx = static_cast<int>(round_px(value_to_pixel(xmap, p.x)));
          const int cy = static_cast<int>(round_px(value_to_pixel(ymap, p.y)));
          paint_rect({cx - 2, cy - 2, 5, 5}, s);
        }
        break;
      }
      case ChartKind::bar: {
        const double group_w = 0.8 * x_step_px;
        const int bar_w = std::max(1, static_cast<int>(std::floor(group_w / n_series)));
        const double base_v = std::max(0.0, spec.y_ticks.front());
        const int base = static_cast<int>(round_px(value_to_pixel(ymap, base_v)));
        for (const auto& p : series.points) {
          const double cx = value_to_pixel(xmap, p.x);
          const int x0 = static_cast<int>(round_px(cx - group_w / 2.0)) + s * bar_w;
          const int ytop = static_cast<int>(round_px(value_to_pixel(ymap, p.y)));
          paint_rect({x0, std::min(ytop, base), bar_w, std::abs(base - ytop)}, s);
        }
        break;
      }
    }
  }

  // Text labels.
  const int plot_cx = (left + right) / 2;
  const int title_w = font::text_width(spec.title, title_scale);
  const int title_x = std::clamp(plot_cx - title_w / 2, kOuter, W - kOuter - title_w);
  const auto title_ink = font::draw_text(img, title_x, kOuter, spec.title, title_scale, colors::kBlack);
  const int xl_w = font::text_width(spec.x_label, 1);
  const int xl_x = std::clamp(plot_cx - xl_w / 2, kOuter, std::max(kOuter, W - kOuter - xl_w));
  const auto xl_ink = font::draw_text(img, xl_x, bottom + kTickLen + kTickGap + text_h + kLabelGap,
                                      spec.x_label, 1, colors::kBlack);
  const int yl_h = font::text_width(spec.y_label, 1);
  const int yl_y = std::clamp((top + bottom) / 2 - yl_h / 2, top, std::max(top, H - kOuter - yl_h));
  const auto yl_ink = font::draw_text(img, kOuter, yl_y, spec.y_label, 1, colors::kBlack, true);
  for (const auto& r : {title_ink, xl_ink, yl_ink}) subplot_extent = unite(subplot_extent, r);

  // Legend.
  PixelRect legend_rect;
  switch (spec.legend_position) {
    case LegendPosition::inside_top_right:
      legend_rect = {right - 6 - legend.width, top + 6, legend.width, legend.height};
      break;
    case LegendPosition::right_of_axes:
      legend_rect = {W - kOuter - legend.width, top, legend.width, legend.height};
      break;
    case LegendPosition::below_axes:
      legend_rect = {std::clamp(plot_cx - legend.width / 2, kOuter, W - kOuter - legend.width),
                     H - kOuter - legend.height, legend.width, legend.height};
      break;
  }
  img.fill_rect(legend_rect, colors::kWhite);
  for (int y = legend_rect.y; y < legend_rect.bottom(); ++y) {
    for (int x = legend_rect.x; x < legend_rect.right(); ++x) {
      owner[static_cast<std::size_t>(y) * static_cast<std::size_t>(W) + static_cast<std::size_t>(x)] = -1;
      const bool border = x == legend_rect.x || y == legend_rect.y ||
                          x == legend_rect.right() - 1 || y == legend_rect.bottom() - 1;
      if (border) img.set(x, y, colors::kBlack);
    }
  }
  std::vector<ElementAnnotation> legend_entries;
  int ex = legend_rect.x + 1 + kLegendPad;
  int ey = legend_rect.y + 1 + kLegendPad;
  for (const auto& s : spec.series) {
    const PixelRect icon{ex, ey + (text_h - kIconH) / 2, kIconW, kIconH};
    img.fill_rect(icon, s.color);
    const auto ink = font::draw_text(img, ex + kIconW + kIconGap, ey, s.name, 1, colors::kBlack);
    auto entry = box_annotation("legend_entry/" + s.name, ElementCategory::legend_region,
                                unite(icon, ink));
    entry.label_text = s.name;
    legend_entries.push_back(std::move(entry));
    if (spec.legend_position == LegendPosition::below_axes) {
      ex += kIconW + kIconGap + font::text_width(s.name, 1) + kEntrySpacing;
    } else {
      ey += kEntryRow;
    }
  }
  if (spec.legend_position == LegendPosition::inside_top_right) {
    subplot_extent = unite(subplot_extent, legend_rect);
  }

  // Annotation order: subplot, legend, legend entries, text labels, ticks.
  out.annotations.push_back(box_annotation("subplot", ElementCategory::subplot, subplot_extent));
  out.annotations.push_back(box_annotation("legend", ElementCategory::legend_region, legend_rect));
  for (auto& e : legend_entries) out.annotations.push_back(std::move(e));
  struct Label {
    const char* id;
    const std::string* text;
    PixelRect ink;
  };
  for (const auto& [id, text, ink] : {Label{"title", &spec.title, title_ink},
                                      Label{"x_label", &spec.x_label, xl_ink},
                                      Label{"y_label", &spec.y_label, yl_ink}}) {
    auto a = box_annotation(id, ElementCategory::text_label, ink);
    a.label_text = *text;
    out.annotations.push_back(std::move(a));
  }
  for (auto& t : ticks) out.annotations.push_back(std::move(t));

  const BBox canvas{0, 0, double(W), double(H)};
  for (const auto& a : out.annotations) {
    validate(a);
    if (a.bbox && !canvas.contains(*a.bbox)) {
      throw CanvasTooSmall("element '" + a.element_id + "' falls outside the canvas");
    }
  }

  out.series_pixels.resize(spec.series.size());
  for (std::size_t i = 0; i < owner.size(); ++i) {
    if (owner[i] >= 0) out.series_pixels[static_cast<std::size_t>(owner[i])].push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

}  // namespace structlens::chartgen
