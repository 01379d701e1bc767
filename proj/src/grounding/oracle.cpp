#include "structlens/grounding/oracle.h"

#include <cmath>

#include "structlens/core/errors.h"

namespace structlens::grounding {

namespace {

bool panel_matches(const ElementAnnotation& a, const ElementRef& ref) {
  if (!ref.panel) return true;
  const auto panel = split_element_id(a.element_id).first;
  if (!panel) return *ref.panel == GridPos{1, 1};
  return *panel == *ref.panel;
}

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

bool matches(const ElementAnnotation& a, const ElementRef& ref) {
  if (a.category != *ref.category || !panel_matches(a, ref)) return false;
  const std::string_view local = split_element_id(a.element_id).second;
  switch (a.category) {
    case ElementCategory::subplot:
      return true;
    case ElementCategory::legend_region:
      if (ref.label) return local.starts_with("legend_entry/") && a.label_text == ref.label;
      return local == "legend";
    case ElementCategory::text_label:
      switch (ref.text_role.value_or(TextRole::title)) {
        case TextRole::title: return local == "title";
        case TextRole::x_label: return local == "x_label";
        case TextRole::y_label: return local == "y_label";
      }
      return false;
    case ElementCategory::axis_tick:
      return ref.axis && ref.value && a.axis_value &&
             local.starts_with(std::string(1, *ref.axis) + "_tick") &&
             same_value(*a.axis_value, *ref.value);
    case ElementCategory::geom_point:
      return ref.label && (a.label_text == ref.label || local == "point/" + *ref.label);
  }
  return false;
}

}  // namespace

const ElementAnnotation* find_element(const std::vector<ElementAnnotation>& annotations,
                                      const ElementRef& ref) {
  if (!ref.category) return nullptr;
  for (const auto& a : annotations) {
    if (matches(a, ref)) return &a;
  }
  return nullptr;
}

OracleBackend::OracleBackend(const chartgen::Manifest& manifest) {
  for (const auto& e : manifest.entries) {
    add_image(manifest.image_path(e).string(), read_annotations(manifest.annotations_path(e)));
  }
}

void OracleBackend::add_image(const std::string& image_ref, std::vector<ElementAnnotation> annotations) {
  std::lock_guard lock(mutex_);
  by_image_[image_ref] = std::move(annotations);
}

std::optional<std::vector<ElementAnnotation>> OracleBackend::annotations_for(
    const std::string& image_ref) const {
  std::lock_guard lock(mutex_);
  auto it = by_image_.find(image_ref);
  if (it == by_image_.end()) return std::nullopt;
  return it->second;
}

GroundingResult OracleBackend::ground(const GroundingRequest& request, const RasterImage& image) {
  GroundingResult result{NotFound{}, id(), std::nullopt};
  const ElementRef ref = parse_element_prompt(request.prompt);
  std::lock_guard lock(mutex_);
  auto it = by_image_.find(request.image_ref);
  if (it == by_image_.end()) return result;
  if (const auto* a = find_element(it->second, ref)) {
    if (a->bbox) {
      result.outcome = *a->bbox;
    } else if (a->point) {
      result.outcome = *a->point;
    }
    result.outcome = clamp_outcome(result.outcome, image.width(), image.height());
  }
  return result;
}

void OracleBackend::on_derived_image(const std::string& derived_ref, const std::string& parent_ref,
                                     const ImageTransform& transform,
                                     const std::vector<ElementAnnotation>& added) {
  std::lock_guard lock(mutex_);
  std::vector<ElementAnnotation> mapped;
  if (auto it = by_image_.find(parent_ref); it != by_image_.end()) {
    for (const auto& a : it->second) {
      ElementAnnotation m = a;
      if (a.bbox) {
        auto box = transform.map_box(*a.bbox);
        if (!box) continue;
        m.bbox = *box;
      }
      if (a.point) {
        auto p = transform.map_point(*a.point);
        if (!p) continue;
        m.point = *p;
      }
      mapped.push_back(std::move(m));
    }
  }
  for (const auto& a : added) mapped.push_back(a);
  by_image_[derived_ref] = std::move(mapped);
}

}  // namespace structlens::grounding
