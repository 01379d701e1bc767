#include "structlens/core/draw.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace structlens::draw {

std::vector<std::pair<double, double>> dash_intervals(double length, const DashPattern& dash) {
  std::vector<std::pair<double, double>> out;
  if (length <= 0.0) return out;
  if (dash.is_solid()) {
    out.emplace_back(0.0, length);
    return out;
  }
  const double period = dash.on + dash.off;
  for (double start = 0.0; start < length; start += period) {
    out.emplace_back(start, std::min(start + dash.on, length));
  }
  return out;
}

void trace_segment(Point a, Point b, const DashPattern& dash,
                   const std::function<void(int, int)>& visit) {
  const double length = distance(a, b);
  if (length <= 0.0) return;
  const Point dir = (1.0 / length) * (b - a);
  const double period = dash.on + dash.off;
  std::int64_t last_x = std::numeric_limits<std::int64_t>::min();
  std::int64_t last_y = std::numeric_limits<std::int64_t>::min();
  const auto samples = static_cast<std::int64_t>(std::ceil(length * 2.0));
  for (std::int64_t k = 0; k < samples; ++k) {
    const double s = 0.5 * static_cast<double>(k);
    if (s >= length) break;
    if (!dash.is_solid() && std::fmod(s, period) >= dash.on) continue;
    const Point p = a + s * dir;
    const std::int64_t x = round_px(p.x);
    const std::int64_t y = round_px(p.y);
    if (x == last_x && y == last_y) continue;
    last_x = x;
    last_y = y;
    visit(static_cast<int>(x), static_cast<int>(y));
  }
}

void segment(RasterImage& img, Point a, Point b, ColorRGB color, const DashPattern& dash) {
  trace_segment(a, b, dash, [&](int x, int y) { img.plot(x, y, color); });
}

void dot(RasterImage& img, Point center, int size, ColorRGB color) {
  const int cx = static_cast<int>(round_px(center.x));
  const int cy = static_cast<int>(round_px(center.y));
  const int lo = -(size - 1) / 2;
  for (int dy = lo; dy < lo + size; ++dy) {
    for (int dx = lo; dx < lo + size; ++dx) img.plot(cx + dx, cy + dy, color);
  }
}

void thick_line(RasterImage& img, int x0, int y0, int x1, int y1, int thickness, ColorRGB color,
                const PixelRect& clip, const std::function<void(int, int)>& visit) {
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  const int lo = -(thickness - 1) / 2;
  auto stamp = [&](int cx, int cy) {
    for (int oy = lo; oy < lo + thickness; ++oy) {
      for (int ox = lo; ox < lo + thickness; ++ox) {
        const int x = cx + ox;
        const int y = cy + oy;
        if (x < clip.x || y < clip.y || x >= clip.right() || y >= clip.bottom()) continue;
        if (!img.in_bounds(x, y)) continue;
        img.set(x, y, color);
        if (visit) visit(x, y);
      }
    }
  };
  while (true) {
    stamp(x0, y0);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace structlens::draw
