#include <map>

#include "common.h"
#include "structlens/charttools/chart_tools.h"
#include "structlens/core/errors.h"

namespace structlens::tools {

namespace {

struct ColorCount {
  std::uint32_t packed = 0;
  std::size_t count = 0;
  std::size_t total = 0;
};

ColorCount count_dominant(const RasterImage& image, const BBox& box) {
  const PixelRect r = covering_rect(box, 0, image.width(), image.height());
  if (r.empty()) throw InvalidArgument("colour box has no pixels inside the image");
  std::map<std::uint32_t, std::size_t> counts;
  std::size_t total = 0;
  for (int y = r.y; y < r.bottom(); ++y) {
    for (int x = r.x; x < r.right(); ++x) {
      const ColorRGB c = image.at(x, y);
      if (!is_data_color(c)) continue;
      ++counts[c.packed()];
      ++total;
    }
  }
  if (total == 0) throw EmptyAfterFiltering("no coloured pixels left in the box");
  ColorCount best;
  for (const auto& [packed, n] : counts) {
    if (n > best.count) best = {packed, n, total};
  }
  return best;
}

}  // namespace

std::string_view to_string(MaskMode m) { return m == MaskMode::keep_only ? "keep_only" : "remove"; }

MaskMode mask_mode_from_string(std::string_view s) {
  if (s == "keep_only" || s == "keep") return MaskMode::keep_only;
  if (s == "remove") return MaskMode::remove;
  throw InvalidArgument("unknown mask mode \"" + std::string(s) + "\"");
}

bool is_data_color(ColorRGB c) {
  return color_distance(c, colors::kWhite) >= kNeutralDistance &&
         color_distance(c, colors::kBlack) >= kNeutralDistance;
}

ColorRGB dominant_color(const RasterImage& image, const BBox& box) {
  return ColorRGB::from_packed(count_dominant(image, box).packed);
}

double dominant_share(const RasterImage& image, const BBox& box) {
  const auto d = count_dominant(image, box);
  return static_cast<double>(d.count) / static_cast<double>(d.total);
}

std::vector<std::uint32_t> color_mask(const RasterImage& image, ColorRGB color,
                                      const PixelRect& region,
                                      const std::optional<PixelRect>& exclude, double tau) {
  std::vector<std::uint32_t> out;
  const int x_end = std::min(region.right(), image.width());
  const int y_end = std::min(region.bottom(), image.height());
  for (int y = std::max(region.y, 0); y < y_end; ++y) {
    for (int x = std::max(region.x, 0); x < x_end; ++x) {
      if (exclude && x >= exclude->x && x < exclude->right() && y >= exclude->y &&
          y < exclude->bottom()) {
        continue;
      }
      const ColorRGB c = image.at(x, y);
      if (is_data_color(c) && color_distance(c, color) <= tau) {
        out.push_back(static_cast<std::uint32_t>(y) * static_cast<std::uint32_t>(image.width()) +
                      static_cast<std::uint32_t>(x));
      }
    }
  }
  return out;
}

ToolOutput mask_by_legend(const RasterImage& image, std::string_view legend_item, MaskMode mode,
                          grounding::Grounder& grounder, double tau) {
  if (legend_item.empty()) throw InvalidArgument("mask_by_legend needs a legend item");
  const std::size_t first_call = grounder.calls().size();

  auto ref = grounding::parse_element_prompt(legend_item);
  if (ref.category != ElementCategory::legend_region || !ref.label) {
    ref = grounding::parse_element_prompt("the legend entry " + std::string(legend_item));
  }
  const std::string label = ref.label.value_or(std::string(legend_item));
  const std::string suffix = detail::panel_suffix(ref.panel);

  const auto entry = grounder.locate(image, "the legend entry \"" + label + "\"" + suffix,
                                     grounding::ExpectedKind::box);
  if (!entry.box()) throw GroundingMiss("legend entry \"" + label + "\" not found");
  const auto dom = count_dominant(image, *entry.box());
  if (static_cast<double>(dom.count) < kMinDominantShare * static_cast<double>(dom.total)) {
    throw AmbiguousColor("no colour holds 20% of the legend entry for \"" + label + "\"");
  }
  const ColorRGB color = ColorRGB::from_packed(dom.packed);

  const int w = image.width();
  const int h = image.height();
  std::optional<PixelRect> exclude;
  if (const auto legend = grounder.locate(image, "the legend" + suffix, grounding::ExpectedKind::box);
      legend.box()) {
    exclude = covering_rect(*legend.box(), 0, w, h);
  }
  PixelRect region = image.bounds();
  if (const auto sub = grounder.locate(image, detail::subplot_ref(ref.panel),
                                       grounding::ExpectedKind::box);
      sub.box()) {
    region = covering_rect(*sub.box(), 0, w, h);
  }

  const auto mask = color_mask(image, color, region, exclude, tau);
  RasterImage out = image;
  if (mode == MaskMode::remove) {
    for (auto i : mask) out.set(static_cast<int>(i % static_cast<std::uint32_t>(w)),
                                static_cast<int>(i / static_cast<std::uint32_t>(w)), colors::kWhite);
  } else {
    std::vector<bool> keep(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), false);
    for (auto i : mask) keep[i] = true;
    for (int y = region.y; y < region.bottom(); ++y) {
      for (int x = region.x; x < region.right(); ++x) {
        if (exclude && x >= exclude->x && x < exclude->right() && y >= exclude->y &&
            y < exclude->bottom()) {
          continue;
        }
        const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                              static_cast<std::size_t>(x);
        if (!keep[i] && is_data_color(out.at(x, y))) out.set(x, y, colors::kWhite);
      }
    }
  }

  ToolOutput result{std::move(out), {}, {}, ImageTransform::identity(w, h), {}, {}};
  result.description = (mode == MaskMode::remove ? "removed series \"" : "kept only series \"") +
                       label + "\"";
  result.note = "legend colour (" + std::to_string(color.r) + ", " + std::to_string(color.g) + ", " +
                std::to_string(color.b) + "), " + std::to_string(mask.size()) + " pixels matched";
  result.provenance.tool = "mask_by_legend";
  result.provenance.args["legend_item"] = std::string(legend_item);
  result.provenance.args["mode"] = std::string(to_string(mode));
  result.provenance.args["tau"] = tau;
  result.provenance.grounding_calls = detail::calls_since(grounder, first_call);
  return result;
}

}  // namespace structlens::tools
