#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "structlens/charttools/tool_output.h"
#include "structlens/core/draw.h"

namespace structlens::tools {

// Crops the grounded subfigure. A legend grounded outside the subfigure box
// is cropped too and stacked underneath, left-aligned, after a 4 px white
// separator. Crop rects are padded by kCropPad and clamped.
inline constexpr int kCropPad = 2;
inline constexpr int kStackSeparator = 4;

ToolOutput crop_subfigure(const RasterImage& image, std::string_view target_desc,
                          grounding::Grounder& grounder);

struct AxisWindow {
  double v_start = 0.0;
  double v_end = 0.0;
};

struct MagnifyRequest {
  std::optional<AxisWindow> x;
  std::optional<AxisWindow> y;
  double scale = 2.0;
  std::optional<GridPos> panel;  // restricts tick lookups to one subplot
};

// Total ruler allowance along a windowed axis, split evenly on both sides of
// the outer tick pixels.
inline constexpr int kRulerMargin = 24;

ToolOutput magnify_region(const RasterImage& image, const MagnifyRequest& request,
                          grounding::Grounder& grounder);

struct LineStyle {
  ColorRGB color = colors::kRed;
  draw::DashPattern dash{};
};

struct AuxiliaryLineRequest {
  char axis = 'y';
  double value = 0.0;
  // Tick values to ground for interpolation. Without them only a value that
  // is itself a tick can be placed.
  std::vector<double> ref_ticks;
  std::optional<GridPos> panel;
  LineStyle style{};
};

// Allowed extrapolation beyond the outermost resolved ticks, as a share of
// the resolved tick span.
inline constexpr double kMaxExtrapolation = 0.10;

ToolOutput add_auxiliary_line(const RasterImage& image, const AuxiliaryLineRequest& request,
                              grounding::Grounder& grounder);

// Pixel position along `axis` for `value`, from grounded tick points.
// Throws GroundingMiss when the value cannot be placed.
double interpolate_tick_pixel(std::span<const std::pair<double, double>> ticks, double value);

enum class MaskMode { keep_only, remove };

std::string_view to_string(MaskMode m);
MaskMode mask_mode_from_string(std::string_view s);  // throws InvalidArgument

inline constexpr double kDefaultTau = 30.0;
inline constexpr double kNeutralDistance = 40.0;   // near-white / near-black cut
inline constexpr double kMinDominantShare = 0.20;

// True for pixels that are neither near white nor near black.
bool is_data_color(ColorRGB c);

// Row-major indices of data pixels inside `region` (minus `exclude`) whose
// colour is within `tau` of `color`.
std::vector<std::uint32_t> color_mask(const RasterImage& image, ColorRGB color,
                                      const PixelRect& region,
                                      const std::optional<PixelRect>& exclude, double tau);

ToolOutput mask_by_legend(const RasterImage& image, std::string_view legend_item, MaskMode mode,
                          grounding::Grounder& grounder, double tau = kDefaultTau);

// Most frequent data colour in the box; ties go to the lowest packed value.
// Throws InvalidArgument for an empty box and EmptyAfterFiltering when no
// data pixel remains.
ColorRGB dominant_color(const RasterImage& image, const BBox& box);

// Share of the box's data pixels held by the dominant colour.
double dominant_share(const RasterImage& image, const BBox& box);

}  // namespace structlens::tools
