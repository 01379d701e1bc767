#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "structlens/core/annotation.h"
#include "structlens/core/raster.h"

namespace structlens::chartgen {

inline constexpr int kMinPanels = 2;
inline constexpr int kMaxPanels = 16;
inline constexpr int kMinMargin = 4;
inline constexpr int kMaxMargin = 40;

struct Panel {
  RasterImage image;
  std::vector<ElementAnnotation> annotations;
};

// Near-square grid: cols = ceil(sqrt(n)), rows = ceil(n / cols).
struct PanelLayout {
  int rows = 0;
  int cols = 0;
  std::vector<int> col_gaps;  // cols + 1 gaps, outer edges included
  std::vector<int> row_gaps;  // rows + 1
  std::vector<int> panel_order;  // input index placed at each row-major slot
};

struct Composite {
  RasterImage image;
  std::vector<ElementAnnotation> annotations;
  PanelLayout layout;
  std::vector<PixelRect> placements;  // per slot
};

// Arranges 2..16 single-panel charts row-major on a white canvas with seeded
// margins in [4, 40] px. Annotations are translated by the panel offset and
// their ids prefixed "r<row>c<col>/"; subplot annotations gain grid_pos.
// Throws LayoutOverflow for a bad panel count or when the composite would
// exceed `max_side` px on either side.
Composite compose_multipanel(std::span<const Panel> panels, std::uint64_t seed,
                             int max_side = 8192);

}  // namespace structlens::chartgen
