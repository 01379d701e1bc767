#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "structlens/chartgen/corpus.h"
#include "structlens/grounding/backend.h"
#include "structlens/grounding/prompt.h"

namespace structlens::grounding {

// Ground-truth lookup standing in for a perfect grounding model. Annotations
// are registered per image reference; derived images inherit them through
// the tool's transform.
class OracleBackend : public GroundingBackend {
 public:
  OracleBackend() = default;

  explicit OracleBackend(const chartgen::Manifest& manifest);

  void add_image(const std::string& image_ref, std::vector<ElementAnnotation> annotations);
  std::optional<std::vector<ElementAnnotation>> annotations_for(const std::string& image_ref) const;

  std::string id() const override { return "oracle"; }
  GroundingResult ground(const GroundingRequest& request, const RasterImage& image) override;
  void on_derived_image(const std::string& derived_ref, const std::string& parent_ref,
                        const ImageTransform& transform,
                        const std::vector<ElementAnnotation>& added) override;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<ElementAnnotation>> by_image_;
};

// First annotation matching the reference, or nullptr.
const ElementAnnotation* find_element(const std::vector<ElementAnnotation>& annotations,
                                      const ElementRef& ref);

}  // namespace structlens::grounding
