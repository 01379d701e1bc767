#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "structlens/core/geometry.h"

namespace structlens::grounding {

enum class ExpectedKind { box, point, any };

std::string_view to_string(ExpectedKind k);

struct GroundingRequest {
  std::string image_ref;  // memory id or file path
  std::string prompt;     // textual element reference, non-empty
  ExpectedKind expected_kind = ExpectedKind::any;
};

struct NotFound {
  friend bool operator==(const NotFound&, const NotFound&) = default;
};

using GroundingOutcome = std::variant<NotFound, BBox, Point>;

struct GroundingResult {
  GroundingOutcome outcome;
  std::string backend_id;
  std::optional<std::string> raw_text;  // model text, verbatim

  bool found() const { return !std::holds_alternative<NotFound>(outcome); }
  const BBox* box() const { return std::get_if<BBox>(&outcome); }
  const Point* point() const { return std::get_if<Point>(&outcome); }
};

nlohmann::ordered_json to_json(const GroundingResult& r);

// Clamps found geometry into a width x height image: boxes to [0, W] x [0, H],
// points to pixel centres [0, W-1] x [0, H-1].
GroundingOutcome clamp_outcome(const GroundingOutcome& outcome, int width, int height);

}  // namespace structlens::grounding
