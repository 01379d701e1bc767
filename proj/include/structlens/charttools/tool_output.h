#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "structlens/core/annotation.h"
#include "structlens/core/raster.h"
#include "structlens/core/transform.h"
#include "structlens/grounding/backend.h"

namespace structlens::tools {

struct Provenance {
  std::string tool;
  nlohmann::ordered_json args = nlohmann::ordered_json::object();
  std::vector<grounding::GroundingCall> grounding_calls;
};

// Result of one image tool. The input image is never modified.
struct ToolOutput {
  RasterImage image;
  std::string description;  // short, for the image pool listing
  Provenance provenance;
  // Input-image coordinates -> output-image coordinates.
  ImageTransform transform;
  // Elements the tool drew, in output coordinates.
  std::vector<ElementAnnotation> added;
  // Extra text for the planner, e.g. constructed point coordinates.
  std::string note;
};

nlohmann::ordered_json to_json(const grounding::GroundingCall& call);
nlohmann::ordered_json provenance_json(const ToolOutput& out);

}  // namespace structlens::tools
