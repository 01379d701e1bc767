#pragma once

#include <cstdint>

namespace structlens {

struct ColorRGB {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  std::uint32_t packed() const { return (std::uint32_t{r} << 16) | (std::uint32_t{g} << 8) | b; }
  static ColorRGB from_packed(std::uint32_t v) {
    return {static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
            static_cast<std::uint8_t>(v)};
  }

  friend bool operator==(const ColorRGB&, const ColorRGB&) = default;
};

namespace colors {
inline constexpr ColorRGB kWhite{255, 255, 255};
inline constexpr ColorRGB kBlack{0, 0, 0};
inline constexpr ColorRGB kRed{255, 0, 0};
}  // namespace colors

// Euclidean distance in RGB space.
double color_distance(ColorRGB a, ColorRGB b);

}  // namespace structlens
