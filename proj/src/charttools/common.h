#pragma once

#include <optional>
#include <string>

#include "structlens/charttools/tool_output.h"
#include "structlens/grounding/prompt.h"

namespace structlens::tools::detail {

// " of the subplot at row R, column C", or nothing.
inline std::string panel_suffix(const std::optional<GridPos>& panel) {
  return panel ? " of " + grounding::subplot_prompt(*panel) : std::string();
}

inline std::string subplot_ref(const std::optional<GridPos>& panel) {
  return panel ? grounding::subplot_prompt(*panel) : std::string("the subplot");
}

// Calls the grounder made from index `first` on.
inline std::vector<grounding::GroundingCall> calls_since(const grounding::Grounder& g,
                                                         std::size_t first) {
  const auto& all = g.calls();
  return {all.begin() + static_cast<std::ptrdiff_t>(std::min(first, all.size())), all.end()};
}

// Point of a grounded element; a box answer counts by its centre.
inline std::optional<Point> located_point(const grounding::GroundingResult& r) {
  if (const auto* p = r.point()) return *p;
  if (const auto* b = r.box()) return Point{(b->x1 + b->x2) / 2.0, (b->y1 + b->y2) / 2.0};
  return std::nullopt;
}

}  // namespace structlens::tools::detail
