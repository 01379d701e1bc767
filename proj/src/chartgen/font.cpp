#include "structlens/chartgen/font.h"

#include <algorithm>
#include <array>
#include <climits>
#include <cstdint>

namespace structlens::chartgen::font {

namespace {

constexpr std::array<std::array<std::uint8_t, kGlyphHeight>, 95> kGlyphs = {{
#include "font_data.inc"
}};

const std::array<std::uint8_t, kGlyphHeight>& glyph(char c) {
  const auto code = static_cast<unsigned char>(c);
  if (code < 32 || code > 126) return kGlyphs['?' - 32];
  return kGlyphs[code - 32];
}

template <typename Fn>
void for_each_lit(int x, int y, std::string_view text, int scale, bool vertical, Fn&& fn) {
  const int total_w = text_width(text, scale);
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto& rows = glyph(text[i]);
    for (int gy = 0; gy < kGlyphHeight; ++gy) {
      for (int gx = 0; gx < kGlyphWidth; ++gx) {
        if (!((rows[static_cast<std::size_t>(gy)] >> (kGlyphWidth - 1 - gx)) & 1)) continue;
        for (int sy = 0; sy < scale; ++sy) {
          for (int sx = 0; sx < scale; ++sx) {
            // Horizontal layout coordinates inside the advance box.
            const int hx = (static_cast<int>(i) * kGlyphWidth + gx) * scale + sx;
            const int hy = gy * scale + sy;
            if (vertical) {
              fn(x + hy, y + (total_w - 1 - hx));
            } else {
              fn(x + hx, y + hy);
            }
          }
        }
      }
    }
  }
}

}  // namespace

int text_width(std::string_view text, int scale) {
  return static_cast<int>(text.size()) * kGlyphWidth * scale;
}

int text_height(int scale) { return kGlyphHeight * scale; }

PixelRect measure_ink(int x, int y, std::string_view text, int scale, bool vertical) {
  int x1 = INT_MAX, y1 = INT_MAX, x2 = INT_MIN, y2 = INT_MIN;
  for_each_lit(x, y, text, scale, vertical, [&](int px, int py) {
    x1 = std::min(x1, px);
    y1 = std::min(y1, py);
    x2 = std::max(x2, px);
    y2 = std::max(y2, py);
  });
  if (x1 == INT_MAX) return {x, y, 0, 0};
  return {x1, y1, x2 - x1 + 1, y2 - y1 + 1};
}

PixelRect draw_text(RasterImage& img, int x, int y, std::string_view text, int scale,
                    ColorRGB color, bool vertical) {
  for_each_lit(x, y, text, scale, vertical, [&](int px, int py) { img.plot(px, py, color); });
  return measure_ink(x, y, text, scale, vertical);
}

}  // namespace structlens::chartgen::font
