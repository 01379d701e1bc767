#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "structlens/core/color.h"
#include "structlens/core/geometry.h"

namespace structlens {

// Integer pixel rectangle, half-open: [x, x + width) x [y, y + height).
struct PixelRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  int right() const { return x + width; }
  int bottom() const { return y + height; }
  bool empty() const { return width <= 0 || height <= 0; }
  BBox to_bbox() const { return {double(x), double(y), double(right()), double(bottom())}; }

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

// Smallest pixel rect covering `box`, grown by `pad` on every side and
// clipped to a width x height canvas.
PixelRect covering_rect(const BBox& box, int pad, int width, int height);

// Owned RGB raster, row-major, 3 bytes per pixel.
class RasterImage {
 public:
  RasterImage(int width, int height, ColorRGB fill = colors::kWhite);
  RasterImage(int width, int height, std::vector<std::uint8_t> rgb);

  int width() const { return width_; }
  int height() const { return height_; }
  PixelRect bounds() const { return {0, 0, width_, height_}; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  ColorRGB at(int x, int y) const {
    const std::size_t i = offset(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, ColorRGB c) {
    const std::size_t i = offset(x, y);
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
  }
  // No-op outside the canvas.
  void plot(int x, int y, ColorRGB c) {
    if (in_bounds(x, y)) set(x, y, c);
  }

  std::span<const std::uint8_t> bytes() const { return data_; }

  RasterImage crop(const PixelRect& rect) const;
  // Copies `src` with its top-left at (x, y); parts outside are dropped.
  void blit(const RasterImage& src, int x, int y);
  void fill_rect(const PixelRect& rect, ColorRGB c);

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

// Nearest-neighbour resize to ceil(width * scale) x ceil(height * scale).
RasterImage scale_nearest(const RasterImage& src, double scale);

// 64-bit FNV-1a over dimensions and pixel bytes.
std::uint64_t content_hash(const RasterImage& image);

}  // namespace structlens
