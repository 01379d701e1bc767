#include "structlens/core/transform.h"

namespace structlens {

ImageTransform ImageTransform::identity(int width, int height) {
  return ImageTransform({TransformPiece{{0, 0, width, height}, {0.0, 0.0}, 1.0}});
}

ImageTransform ImageTransform::crop(const PixelRect& rect) {
  return ImageTransform({TransformPiece{rect, {0.0, 0.0}, 1.0}});
}

std::optional<Point> ImageTransform::map_point(Point p) const {
  for (const auto& piece : pieces_) {
    const auto& r = piece.source;
    // Point coordinates name pixel centres, so pixel i is inside [i-0.5, i+0.5).
    if (p.x < r.x - 0.5 || p.y < r.y - 0.5 || p.x >= r.right() - 0.5 ||
        p.y >= r.bottom() - 0.5) {
      continue;
    }
    const double s = piece.scale;
    return Point{piece.dest_origin.x + (p.x - r.x + 0.5) * s - 0.5,
                 piece.dest_origin.y + (p.y - r.y + 0.5) * s - 0.5};
  }
  return std::nullopt;
}

std::optional<BBox> ImageTransform::map_box(const BBox& b) const {
  // Stacked crops may overlap by their padding, so the piece holding the
  // largest share of the box wins.
  const TransformPiece* best = nullptr;
  BBox best_clip;
  double best_area = -1.0;
  for (const auto& piece : pieces_) {
    const BBox src = piece.source.to_bbox();
    const BBox clipped = intersect(b, src);
    const bool degenerate_inside = b.area() == 0.0 && src.contains(b);
    if (clipped.area() <= 0.0 && !degenerate_inside) continue;
    if (clipped.area() > best_area) {
      best = &piece;
      best_clip = degenerate_inside ? b : clipped;
      best_area = clipped.area();
    }
  }
  if (!best) return std::nullopt;
  const BBox src = best->source.to_bbox();
  const double s = best->scale;
  return BBox{best->dest_origin.x + (best_clip.x1 - src.x1) * s,
              best->dest_origin.y + (best_clip.y1 - src.y1) * s,
              best->dest_origin.x + (best_clip.x2 - src.x1) * s,
              best->dest_origin.y + (best_clip.y2 - src.y1) * s};
}

}  // namespace structlens
