#include "structlens/chartgen/compose.h"

#include <cmath>
#include <numeric>
#include <string>

#include "structlens/chartgen/sampler.h"
#include "structlens/core/errors.h"

namespace structlens::chartgen {

Composite compose_multipanel(std::span<const Panel> panels, std::uint64_t seed, int max_side) {
  const int n = static_cast<int>(panels.size());
  if (n < kMinPanels || n > kMaxPanels) {
    throw LayoutOverflow("multi-panel figures take 2 to 16 panels, got " + std::to_string(n));
  }
  PanelLayout layout;
  layout.cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  layout.rows = (n + layout.cols - 1) / layout.cols;
  Sampler rng(mix_seed(seed, 0x1a7));
  for (int i = 0; i <= layout.cols; ++i) {
    layout.col_gaps.push_back(static_cast<int>(rng.uniform_int(kMinMargin, kMaxMargin)));
  }
  for (int i = 0; i <= layout.rows; ++i) {
    layout.row_gaps.push_back(static_cast<int>(rng.uniform_int(kMinMargin, kMaxMargin)));
  }
  layout.panel_order.resize(static_cast<std::size_t>(n));
  std::iota(layout.panel_order.begin(), layout.panel_order.end(), 0);

  std::vector<int> col_w(static_cast<std::size_t>(layout.cols), 0);
  std::vector<int> row_h(static_cast<std::size_t>(layout.rows), 0);
  for (int i = 0; i < n; ++i) {
    const auto& img = panels[static_cast<std::size_t>(i)].image;
    auto& cw = col_w[static_cast<std::size_t>(i % layout.cols)];
    auto& rh = row_h[static_cast<std::size_t>(i / layout.cols)];
    cw = std::max(cw, img.width());
    rh = std::max(rh, img.height());
  }
  std::vector<int> col_x(static_cast<std::size_t>(layout.cols));
  std::vector<int> row_y(static_cast<std::size_t>(layout.rows));
  long total_w = 0;
  for (int c = 0; c < layout.cols; ++c) {
    total_w += layout.col_gaps[static_cast<std::size_t>(c)];
    col_x[static_cast<std::size_t>(c)] = static_cast<int>(total_w);
    total_w += col_w[static_cast<std::size_t>(c)];
  }
  total_w += layout.col_gaps.back();
  long total_h = 0;
  for (int r = 0; r < layout.rows; ++r) {
    total_h += layout.row_gaps[static_cast<std::size_t>(r)];
    row_y[static_cast<std::size_t>(r)] = static_cast<int>(total_h);
    total_h += row_h[static_cast<std::size_t>(r)];
  }
  total_h += layout.row_gaps.back();
  if (total_w > max_side || total_h > max_side) {
    throw LayoutOverflow("composite of " + std::to_string(total_w) + "x" + std::to_string(total_h) +
                         " px exceeds the " + std::to_string(max_side) + " px limit");
  }

  Composite out{RasterImage(static_cast<int>(total_w), static_cast<int>(total_h)), {}, layout, {}};
  for (int i = 0; i < n; ++i) {
    const auto& panel = panels[static_cast<std::size_t>(i)];
    const GridPos pos{i / layout.cols + 1, i % layout.cols + 1};
    const int x = col_x[static_cast<std::size_t>(pos.col - 1)];
    const int y = row_y[static_cast<std::size_t>(pos.row - 1)];
    out.image.blit(panel.image, x, y);
    out.placements.push_back({x, y, panel.image.width(), panel.image.height()});
    const Point offset{double(x), double(y)};
    for (const auto& src : panel.annotations) {
      if (split_element_id(src.element_id).first) {
        throw InvalidArgument("panel annotation '" + src.element_id + "' is already nested");
      }
      ElementAnnotation a = src;
      a.element_id = panel_prefix(pos) + src.element_id;
      if (a.bbox) a.bbox = translate(*a.bbox, offset);
      if (a.point) a.point = *a.point + offset;
      if (a.category == ElementCategory::subplot) a.grid_pos = pos;
      out.annotations.push_back(std::move(a));
    }
  }
  return out;
}

}  // namespace structlens::chartgen
