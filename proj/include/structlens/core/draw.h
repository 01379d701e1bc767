#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "structlens/core/raster.h"

namespace structlens::draw {

// Dash schedule: `on` lit pixels then `off` dark pixels, by arc length.
struct DashPattern {
  double on = 6.0;
  double off = 4.0;

  static DashPattern solid() { return {1.0, 0.0}; }
  bool is_solid() const { return off <= 0.0; }
};

// Lit arc-length intervals [start, end) of a dashed stroke of `length`.
std::vector<std::pair<double, double>> dash_intervals(double length, const DashPattern& dash);

// Visits each lit pixel of segment a->b once, in order. Samples every half
// pixel of arc length and rounds half away from zero. The end point itself is
// excluded so dash counts depend only on the traversed length.
void trace_segment(Point a, Point b, const DashPattern& dash,
                   const std::function<void(int x, int y)>& visit);

void segment(RasterImage& img, Point a, Point b, ColorRGB color,
             const DashPattern& dash = DashPattern::solid());

// Filled square of side `size` centred on the rounded point.
void dot(RasterImage& img, Point center, int size, ColorRGB color);

// Bresenham line with a square brush of side `thickness`, clipped to `clip`.
// `visit` fires for each painted pixel.
void thick_line(RasterImage& img, int x0, int y0, int x1, int y1, int thickness,
                ColorRGB color, const PixelRect& clip,
                const std::function<void(int, int)>& visit = {});

}  // namespace structlens::draw
