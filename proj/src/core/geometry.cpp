#include "structlens/core/geometry.h"

#include <algorithm>

#include "structlens/core/color.h"

namespace structlens {

BBox intersect(const BBox& a, const BBox& b) {
  BBox r{std::max(a.x1, b.x1), std::max(a.y1, b.y1), std::min(a.x2, b.x2), std::min(a.y2, b.y2)};
  if (r.x2 < r.x1) r.x2 = r.x1;
  if (r.y2 < r.y1) r.y2 = r.y1;
  return r;
}

BBox unite(const BBox& a, const BBox& b) {
  return {std::min(a.x1, b.x1), std::min(a.y1, b.y1), std::max(a.x2, b.x2), std::max(a.y2, b.y2)};
}

BBox translate(const BBox& b, Point offset) {
  return {b.x1 + offset.x, b.y1 + offset.y, b.x2 + offset.x, b.y2 + offset.y};
}

double bbox_iou(const BBox& a, const BBox& b) {
  const double iw = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const double ih = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) {
    return a == b ? 1.0 : 0.0;
  }
  return std::clamp(inter / uni, 0.0, 1.0);
}

double pck_threshold(int width, int height) { return 0.01 * std::max(width, height); }

bool pck_hit(Point pred, Point gt, int width, int height) {
  return distance(pred, gt) <= pck_threshold(width, height);
}

double color_distance(ColorRGB a, ColorRGB b) {
  const double dr = double(a.r) - b.r;
  const double dg = double(a.g) - b.g;
  const double db = double(a.b) - b.b;
  return std::sqrt(dr * dr + dg * dg + db * db);
}

}  // namespace structlens
