#pragma once

#include <cstdint>
#include <vector>

#include "structlens/chartgen/chart_spec.h"
#include "structlens/core/annotation.h"
#include "structlens/core/raster.h"

namespace structlens::chartgen {

struct RenderResult {
  RasterImage image;
  std::vector<ElementAnnotation> annotations;
  std::vector<AxisMap> axis_maps;  // x then y
  // Per series (spec order): row-major pixel indices the series owns in the
  // final image, i.e. painted by it and not overdrawn afterwards.
  std::vector<std::vector<std::uint32_t>> series_pixels;
  // Axes frame including the axis lines.
  PixelRect plot_rect;
};

// Renders the chart and records the exact extent of every element.
// Throws CanvasTooSmall when the layout cannot fit the canvas.
RenderResult render_chart(const ChartSpec& spec);

}  // namespace structlens::chartgen
