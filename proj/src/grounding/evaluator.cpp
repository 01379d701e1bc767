#include "structlens/grounding/evaluator.h"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

#include "structlens/core/errors.h"
#include "structlens/core/png_io.h"
#include "structlens/grounding/prompt.h"

namespace structlens::grounding {

namespace {

struct ImageTally {
  std::map<ElementCategory, double> score_sum;
  std::map<ElementCategory, std::size_t> count;
  std::size_t malformed = 0;
  std::size_t not_found = 0;
};

double score(const ElementAnnotation& truth, const GroundingResult& r, int width, int height) {
  if (uses_bbox(truth.category)) {
    const auto* box = r.box();
    return box ? bbox_iou(*box, *truth.bbox) : 0.0;
  }
  if (const auto* p = r.point()) return pck_hit(*p, *truth.point, width, height) ? 1.0 : 0.0;
  if (const auto* b = r.box()) {
    const Point centre{(b->x1 + b->x2) / 2.0, (b->y1 + b->y2) / 2.0};
    return pck_hit(centre, *truth.point, width, height) ? 1.0 : 0.0;
  }
  return 0.0;
}

ImageTally evaluate_image(GroundingBackend& backend, const chartgen::Manifest& manifest,
                          const chartgen::ManifestEntry& entry) {
  const auto image_path = manifest.image_path(entry);
  const RasterImage image = read_png(image_path);
  const auto annotations = read_annotations(manifest.annotations_path(entry));
  ImageTally tally;
  for (const auto& a : annotations) {
    const GroundingRequest request{image_path.string(), canonical_prompt(a),
                                   uses_bbox(a.category) ? ExpectedKind::box : ExpectedKind::point};
    double s = 0.0;
    try {
      const auto result = backend.ground(request, image);
      if (!result.found()) ++tally.not_found;
      s = score(a, result, image.width(), image.height());
    } catch (const MalformedResponse&) {
      ++tally.malformed;
    } catch (const BackendUnavailable& e) {
      throw BackendUnavailable("sample " + image_path.string() + ", element " + a.element_id +
                               ": " + e.what());
    }
    tally.score_sum[a.category] += s;
    ++tally.count[a.category];
  }
  return tally;
}

}  // namespace

nlohmann::ordered_json to_json(const GroundingReport& report) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [cat, s] : report.per_category) per[std::string(to_string(cat))] = s;
  for (const auto& [cat, n] : report.n_per_category) counts[std::string(to_string(cat))] = n;
  j["per_category"] = std::move(per);
  j["overall"] = report.overall;
  j["n_per_category"] = std::move(counts);
  j["images"] = report.images;
  j["malformed"] = report.malformed;
  j["not_found"] = report.not_found;
  return j;
}

GroundingReport evaluate_grounding(GroundingBackend& backend, const chartgen::Manifest& manifest,
                                   const EvalOptions& options) {
  std::size_t total = manifest.entries.size();
  if (options.sample_limit > 0) total = std::min(total, options.sample_limit);

  std::vector<ImageTally> tallies(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        tallies[i] = evaluate_image(backend, manifest, manifest.entries[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(options.max_in_flight, total)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Reduce in manifest order so the floating-point sums are reproducible.
  GroundingReport report;
  report.images = total;
  std::map<ElementCategory, double> sums;
  for (const auto& t : tallies) {
    for (const auto& [cat, s] : t.score_sum) sums[cat] += s;
    for (const auto& [cat, n] : t.count) report.n_per_category[cat] += n;
    report.malformed += t.malformed;
    report.not_found += t.not_found;
  }
  double acc = 0.0;
  for (const auto& [cat, n] : report.n_per_category) {
    if (n == 0) continue;
    report.per_category[cat] = sums[cat] / static_cast<double>(n);
    acc += report.per_category[cat];
  }
  if (!report.per_category.empty()) acc /= static_cast<double>(report.per_category.size());
  report.overall = acc;
  return report;
}

std::string PerturbedBackend::id() const {
  return inner_->id() + "+offset" + format_number(offset_);
}

GroundingResult PerturbedBackend::ground(const GroundingRequest& request, const RasterImage& image) {
  auto r = inner_->ground(request, image);
  if (auto* b = std::get_if<BBox>(&r.outcome)) {
    *b = translate(*b, {offset_, offset_});
  } else if (auto* p = std::get_if<Point>(&r.outcome)) {
    *p = *p + Point{offset_, offset_};
  }
  r.outcome = clamp_outcome(r.outcome, image.width(), image.height());
  r.backend_id = id();
  return r;
}

}  // namespace structlens::grounding
