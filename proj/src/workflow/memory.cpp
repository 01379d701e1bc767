#include "structlens/workflow/memory.h"

#include <charconv>
#include <cmath>
#include <map>

#include "structlens/core/annotation.h"
#include "structlens/core/errors.h"

namespace structlens::workflow {

std::string ArgValue::as_string() const {
  return kind == Kind::number ? format_number(number) : text;
}

std::optional<double> ArgValue::as_number() const {
  if (kind == Kind::number) return number;
  if (kind == Kind::image_id || text.empty()) return std::nullopt;
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && text[b] == ' ') ++b;
  while (e > b && text[e - 1] == ' ') --e;
  if (b < e && text[b] == '+') ++b;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data() + b, text.data() + e, v);
  if (ec != std::errc() || ptr != text.data() + e || !std::isfinite(v)) return std::nullopt;
  return v;
}

const ArgValue* ToolCall::find(std::string_view key) const {
  for (const auto& [k, v] : args) {
    if (k == key) return &v;
  }
  return nullptr;
}

bool looks_like_image_id(std::string_view s) {
  if (!s.starts_with("img_") || s.size() == 4) return false;
  for (char c : s.substr(4)) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::optional<std::size_t> ImageMemory::index_of(std::string_view image_id) const {
  if (!looks_like_image_id(image_id) || image_id.size() > 14) return std::nullopt;
  std::size_t n = 0;
  std::from_chars(image_id.data() + 4, image_id.data() + image_id.size(), n);
  if (n >= entries_.size() || entries_[n].image_id != image_id) return std::nullopt;
  return n;
}

std::string ImageMemory::put(RasterImage image, std::string description,
                             std::optional<std::string> parent_id,
                             std::optional<ToolCall> action) {
  if (description.empty()) throw InvalidArgument("memory entries need a description");
  if (entries_.empty() && parent_id) throw InvalidArgument("the first memory entry is the root");
  if (!entries_.empty() && !parent_id) throw InvalidArgument("only img_0 may lack a parent");
  if (parent_id && !index_of(*parent_id)) throw UnknownImageId("unknown parent " + *parent_id);
  std::string id = "img_" + std::to_string(entries_.size());
  entries_.push_back({id, std::move(image), std::move(description), std::move(parent_id),
                      std::move(action)});
  return id;
}

const MemoryEntry& ImageMemory::get(std::string_view image_id) const {
  const auto i = index_of(image_id);
  if (!i) throw UnknownImageId("no image with id " + std::string(image_id));
  return entries_[*i];
}

bool ImageMemory::contains(std::string_view image_id) const { return index_of(image_id).has_value(); }

std::vector<std::string> ImageMemory::children(std::string_view image_id) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.parent_id && *e.parent_id == image_id) out.push_back(e.image_id);
  }
  return out;
}

std::size_t ImageMemory::max_branching() const {
  std::map<std::string, std::size_t> fanout;
  std::size_t best = 0;
  for (const auto& e : entries_) {
    if (e.parent_id) best = std::max(best, ++fanout[*e.parent_id]);
  }
  return best;
}

void ImageMemory::validate_tree() const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.image_id != "img_" + std::to_string(i)) throw SchemaError("memory ids out of sequence");
    if (i == 0) {
      if (e.parent_id) throw SchemaError("memory root has a parent");
      continue;
    }
    if (!e.parent_id) throw SchemaError(e.image_id + " has no parent");
    // Parents always precede children, which rules out cycles.
    const auto p = index_of(*e.parent_id);
    if (!p || *p >= i) throw SchemaError(e.image_id + " has an invalid parent");
  }
}

std::string ImageMemory::pool_listing() const {
  std::string out;
  for (const auto& e : entries_) {
    out += e.image_id + ": " + e.description;
    if (e.parent_id) out += " (from " + *e.parent_id + ")";
    out += "\n";
  }
  return out;
}

}  // namespace structlens::workflow
