#pragma once

#include <cstddef>
#include <map>

#include <nlohmann/json.hpp>

#include "structlens/chartgen/corpus.h"
#include "structlens/grounding/backend.h"

namespace structlens::grounding {

struct GroundingReport {
  std::map<ElementCategory, double> per_category;       // present categories only
  std::map<ElementCategory, std::size_t> n_per_category;
  double overall = 0.0;  // unweighted mean over present categories
  std::size_t images = 0;
  std::size_t malformed = 0;  // MalformedResponse replies, scored 0
  std::size_t not_found = 0;
};

nlohmann::ordered_json to_json(const GroundingReport& report);

struct EvalOptions {
  std::size_t sample_limit = 0;  // images; 0 = all
  unsigned max_in_flight = 4;
};

// Issues the canonical prompt for every annotation of every manifest image.
// Boxes score IoU (not_found and points score 0); ticks and geometry points
// score PCK@0.01 (a box answer is judged by its centre). Scores are averaged
// per element within a category. Backend transport errors propagate with the
// sample and element named.
GroundingReport evaluate_grounding(GroundingBackend& backend, const chartgen::Manifest& manifest,
                                   const EvalOptions& options = {});

// Decorator that shifts every found box or point by (+offset, +offset) px
// before clamping. Used to probe metric monotonicity.
class PerturbedBackend : public GroundingBackend {
 public:
  PerturbedBackend(GroundingBackend& inner, double offset) : inner_(&inner), offset_(offset) {}

  std::string id() const override;
  GroundingResult ground(const GroundingRequest& request, const RasterImage& image) override;
  void on_derived_image(const std::string& derived_ref, const std::string& parent_ref,
                        const ImageTransform& transform,
                        const std::vector<ElementAnnotation>& added) override {
    inner_->on_derived_image(derived_ref, parent_ref, transform, added);
  }

 private:
  GroundingBackend* inner_;
  double offset_;
};

}  // namespace structlens::grounding
