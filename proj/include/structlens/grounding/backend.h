#pragma once

#include <string>
#include <vector>

#include "structlens/core/annotation.h"
#include "structlens/core/raster.h"
#include "structlens/core/transform.h"
#include "structlens/grounding/types.h"

namespace structlens::grounding {

// Maps textual element references to pixel geometry. Implementations must be
// safe for concurrent ground() calls.
class GroundingBackend {
 public:
  virtual ~GroundingBackend() = default;

  virtual std::string id() const = 0;

  // not_found is a regular outcome. Throws BackendUnavailable on transport
  // failure and MalformedResponse on unparseable model output.
  virtual GroundingResult ground(const GroundingRequest& request, const RasterImage& image) = 0;

  // Called when `derived_ref` is produced from `parent_ref` by a tool.
  // `added` lists elements the tool drew (e.g. a constructed foot point),
  // already in derived-image coordinates.
  virtual void on_derived_image(const std::string& /*derived_ref*/,
                                const std::string& /*parent_ref*/,
                                const ImageTransform& /*transform*/,
                                const std::vector<ElementAnnotation>& /*added*/) {}
};

// Grounding calls made on behalf of one tool invocation.
struct GroundingCall {
  GroundingRequest request;
  GroundingResult result;
};

// Binds a backend to one image reference and records every call.
class Grounder {
 public:
  Grounder(GroundingBackend& backend, std::string image_ref)
      : backend_(&backend), image_ref_(std::move(image_ref)) {}

  GroundingResult locate(const RasterImage& image, std::string prompt, ExpectedKind kind);

  const std::vector<GroundingCall>& calls() const { return calls_; }
  const std::string& image_ref() const { return image_ref_; }
  GroundingBackend& backend() const { return *backend_; }

 private:
  GroundingBackend* backend_;
  std::string image_ref_;
  std::vector<GroundingCall> calls_;
};

}  // namespace structlens::grounding
