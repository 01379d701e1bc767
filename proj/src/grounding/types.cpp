#include <algorithm>

#include "structlens/grounding/backend.h"
#include "structlens/grounding/types.h"

namespace structlens::grounding {

std::string_view to_string(ExpectedKind k) {
  switch (k) {
    case ExpectedKind::box: return "box";
    case ExpectedKind::point: return "point";
    case ExpectedKind::any: return "any";
  }
  return "any";
}

nlohmann::ordered_json to_json(const GroundingResult& r) {
  nlohmann::ordered_json j;
  if (const auto* b = r.box()) {
    j["outcome"] = "found_box";
    j["bbox"] = {b->x1, b->y1, b->x2, b->y2};
  } else if (const auto* p = r.point()) {
    j["outcome"] = "found_point";
    j["point"] = {p->x, p->y};
  } else {
    j["outcome"] = "not_found";
  }
  j["backend_id"] = r.backend_id;
  if (r.raw_text) j["raw_text"] = *r.raw_text;
  return j;
}

GroundingOutcome clamp_outcome(const GroundingOutcome& outcome, int width, int height) {
  const double w = width;
  const double h = height;
  if (const auto* b = std::get_if<BBox>(&outcome)) {
    BBox c{std::clamp(std::min(b->x1, b->x2), 0.0, w), std::clamp(std::min(b->y1, b->y2), 0.0, h),
           std::clamp(std::max(b->x1, b->x2), 0.0, w), std::clamp(std::max(b->y1, b->y2), 0.0, h)};
    return c;
  }
  if (const auto* p = std::get_if<Point>(&outcome)) {
    return Point{std::clamp(p->x, 0.0, w - 1.0), std::clamp(p->y, 0.0, h - 1.0)};
  }
  return outcome;
}

GroundingResult Grounder::locate(const RasterImage& image, std::string prompt, ExpectedKind kind) {
  GroundingRequest request{image_ref_, std::move(prompt), kind};
  auto result = backend_->ground(request, image);
  calls_.push_back({std::move(request), result});
  return result;
}

}  // namespace structlens::grounding
