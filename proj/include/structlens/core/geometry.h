#pragma once

#include <cmath>
#include <cstdint>

namespace structlens {

// Pixel-space point. Origin top-left, y grows downward. Integer coordinates
// name pixel centers.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

// Axis-aligned box in pixel-edge coordinates: covers pixel columns
// x1 <= i < x2 and rows y1 <= j < y2 when the edges are integral.
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  bool valid() const {
    return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
           std::isfinite(y2) && x1 <= x2 && y1 <= y2;
  }
  bool contains(const BBox& o) const {
    return o.x1 >= x1 && o.y1 >= y1 && o.x2 <= x2 && o.y2 <= y2;
  }
  bool contains(Point p) const { return p.x >= x1 && p.x <= x2 && p.y >= y1 && p.y <= y2; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

BBox intersect(const BBox& a, const BBox& b);  // empty boxes collapse to zero area
BBox unite(const BBox& a, const BBox& b);
BBox translate(const BBox& b, Point offset);

// Intersection over union. Disjoint boxes score 0; a zero-area union scores 1
// only when both boxes are the same point.
double bbox_iou(const BBox& a, const BBox& b);

// Keypoint threshold: 0.01 * max(height, width).
double pck_threshold(int width, int height);

// True iff |pred - gt| <= pck_threshold(width, height). Inclusive boundary.
bool pck_hit(Point pred, Point gt, int width, int height);

// Rounds half away from zero, the rasterization rule for float coordinates.
inline std::int64_t round_px(double v) { return std::llround(v); }

}  // namespace structlens
