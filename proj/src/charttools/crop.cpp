#include <algorithm>

#include "common.h"
#include "structlens/charttools/chart_tools.h"
#include "structlens/core/errors.h"

namespace structlens::tools {

ToolOutput crop_subfigure(const RasterImage& image, std::string_view target_desc,
                          grounding::Grounder& grounder) {
  if (image.width() < 8 || image.height() < 8) {
    throw InvalidArgument("crop_subfigure needs an image of at least 8x8 px");
  }
  if (target_desc.empty()) throw InvalidArgument("crop_subfigure needs a target description");
  const std::size_t first_call = grounder.calls().size();
  const auto ref = grounding::parse_element_prompt(target_desc);

  const auto target = grounder.locate(image, std::string(target_desc), grounding::ExpectedKind::box);
  const BBox* box = target.box();
  if (!box) throw GroundingMiss("no subfigure matches \"" + std::string(target_desc) + "\"");
  if (box->width() < 4.0 || box->height() < 4.0) {
    throw DegenerateRegion("grounded subfigure is smaller than 4x4 px");
  }

  const int w = image.width();
  const int h = image.height();
  const PixelRect sub_rect = covering_rect(*box, kCropPad, w, h);
  RasterImage out = image.crop(sub_rect);
  std::vector<TransformPiece> pieces{{sub_rect, {0.0, 0.0}, 1.0}};

  const auto legend = grounder.locate(image, "the legend" + detail::panel_suffix(ref.panel),
                                      grounding::ExpectedKind::box);
  bool stacked = false;
  if (const BBox* lb = legend.box(); lb && lb->area() > 0.0 && !box->contains(*lb)) {
    const PixelRect leg_rect = covering_rect(*lb, kCropPad, w, h);
    if (!leg_rect.empty()) {
      const int top = out.height() + kStackSeparator;
      RasterImage combined(std::max(out.width(), leg_rect.width), top + leg_rect.height);
      combined.blit(out, 0, 0);
      combined.blit(image.crop(leg_rect), 0, top);
      pieces.push_back({leg_rect, {0.0, static_cast<double>(top)}, 1.0});
      out = std::move(combined);
      stacked = true;
    }
  }

  ToolOutput result{std::move(out), {}, {}, ImageTransform(std::move(pieces)), {}, {}};
  result.description = ref.panel ? "cropped subplot row " + std::to_string(ref.panel->row) +
                                       " col " + std::to_string(ref.panel->col)
                                 : std::string("cropped subplot");
  if (stacked) result.description += " with its legend stacked below";
  result.provenance.tool = "crop_subfigure";
  result.provenance.args["target_desc"] = std::string(target_desc);
  result.provenance.grounding_calls = detail::calls_since(grounder, first_call);
  return result;
}

}  // namespace structlens::tools
