#include "structlens/core/raster.h"

#include <algorithm>
#include <cmath>

#include "structlens/core/errors.h"

namespace structlens {

PixelRect covering_rect(const BBox& box, int pad, int width, int height) {
  const int x1 = std::clamp(static_cast<int>(std::floor(box.x1)) - pad, 0, width);
  const int y1 = std::clamp(static_cast<int>(std::floor(box.y1)) - pad, 0, height);
  const int x2 = std::clamp(static_cast<int>(std::ceil(box.x2)) + pad, 0, width);
  const int y2 = std::clamp(static_cast<int>(std::ceil(box.y2)) + pad, 0, height);
  return {x1, y1, std::max(0, x2 - x1), std::max(0, y2 - y1)};
}

RasterImage::RasterImage(int width, int height, ColorRGB fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("raster dimensions must be >= 1, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), data_(std::move(rgb)) {
  if (width < 1 || height < 1) throw InvalidArgument("raster dimensions must be >= 1");
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
    throw InvalidArgument("pixel buffer size does not match dimensions");
  }
}

RasterImage RasterImage::crop(const PixelRect& rect) const {
  const int x1 = std::clamp(rect.x, 0, width_);
  const int y1 = std::clamp(rect.y, 0, height_);
  const int x2 = std::clamp(rect.right(), 0, width_);
  const int y2 = std::clamp(rect.bottom(), 0, height_);
  if (x2 <= x1 || y2 <= y1) throw InvalidArgument("crop rectangle is empty after clipping");
  RasterImage out(x2 - x1, y2 - y1);
  for (int y = y1; y < y2; ++y) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(offset(x1, y)), (x2 - x1) * 3,
                out.data_.begin() + static_cast<std::ptrdiff_t>(out.offset(0, y - y1)));
  }
  return out;
}

void RasterImage::blit(const RasterImage& src, int x, int y) {
  for (int sy = 0; sy < src.height(); ++sy) {
    for (int sx = 0; sx < src.width(); ++sx) plot(x + sx, y + sy, src.at(sx, sy));
  }
}

void RasterImage::fill_rect(const PixelRect& rect, ColorRGB c) {
  const int x1 = std::max(rect.x, 0);
  const int y1 = std::max(rect.y, 0);
  const int x2 = std::min(rect.right(), width_);
  const int y2 = std::min(rect.bottom(), height_);
  for (int y = y1; y < y2; ++y) {
    for (int x = x1; x < x2; ++x) set(x, y, c);
  }
}

RasterImage scale_nearest(const RasterImage& src, double scale) {
  if (!(scale >= 1.0) || !std::isfinite(scale)) throw InvalidArgument("scale must be >= 1");
  const int w = static_cast<int>(std::ceil(src.width() * scale));
  const int h = static_cast<int>(std::ceil(src.height() * scale));
  RasterImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = std::min(static_cast<int>(std::floor(y / scale)), src.height() - 1);
    for (int x = 0; x < w; ++x) {
      const int sx = std::min(static_cast<int>(std::floor(x / scale)), src.width() - 1);
      out.set(x, y, src.at(sx, sy));
    }
  }
  return out;
}

std::uint64_t content_hash(const RasterImage& image) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint8_t byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (int v : {image.width(), image.height()}) {
    for (int i = 0; i < 4; ++i) mix(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  for (auto byte : image.bytes()) mix(byte);
  return h;
}

}  // namespace structlens
