#pragma once

#include <string_view>

#include "structlens/core/raster.h"

namespace structlens::chartgen {

// Embedded 6x11 monospace bitmap font, drawn at integer scales.
namespace font {

inline constexpr int kGlyphWidth = 6;
inline constexpr int kGlyphHeight = 11;

// Advance-box size of a single-line string at `scale`.
int text_width(std::string_view text, int scale);
int text_height(int scale);

// Draws `text` with its advance box at (x, y). Returns the tight bounding box
// of the lit pixels actually written (empty box at (x, y) when none).
// `vertical` rotates the text 90 degrees counter-clockwise, reading bottom to
// top, with the advance box occupying text_height wide by text_width tall.
PixelRect draw_text(RasterImage& img, int x, int y, std::string_view text, int scale,
                    ColorRGB color, bool vertical = false);

// Same extent computation without touching any image.
PixelRect measure_ink(int x, int y, std::string_view text, int scale, bool vertical = false);

}  // namespace font
}  // namespace structlens::chartgen
