#pragma once

#include <optional>
#include <vector>

#include "structlens/core/geometry.h"
#include "structlens/core/raster.h"

namespace structlens {

// Maps coordinates of a source image into an image derived from it (crop,
// magnification, stacked crops). Each piece carries a source rectangle that
// lands at `dest_origin` after scaling by `scale`.
struct TransformPiece {
  PixelRect source;
  Point dest_origin;
  double scale = 1.0;
};

class ImageTransform {
 public:
  ImageTransform() = default;
  explicit ImageTransform(std::vector<TransformPiece> pieces) : pieces_(std::move(pieces)) {}

  static ImageTransform identity(int width, int height);
  static ImageTransform crop(const PixelRect& rect);

  const std::vector<TransformPiece>& pieces() const { return pieces_; }

  // First piece containing the point wins; nullopt when no piece covers it.
  std::optional<Point> map_point(Point p) const;
  // Clips the box to the piece it overlaps most; nullopt when none overlaps.
  std::optional<BBox> map_box(const BBox& b) const;

 private:
  std::vector<TransformPiece> pieces_;
};

}  // namespace structlens
