#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "structlens/core/raster.h"

namespace structlens::workflow {

// Value of a tool-call argument as written by the planner.
struct ArgValue {
  enum class Kind { text, number, image_id, word };

  Kind kind = Kind::word;
  std::string text;  // text, image id or bare word
  double number = 0.0;

  static ArgValue quoted(std::string s) { return {Kind::text, std::move(s), 0.0}; }
  static ArgValue bare(std::string s) { return {Kind::word, std::move(s), 0.0}; }
  static ArgValue image(std::string id) { return {Kind::image_id, std::move(id), 0.0}; }
  static ArgValue of_number(double v) { return {Kind::number, {}, v}; }

  // Text form of any kind; numbers use the shortest round-trip spelling.
  std::string as_string() const;
  // Numbers, or text that parses completely as a finite number.
  std::optional<double> as_number() const;

  friend bool operator==(const ArgValue&, const ArgValue&) = default;
};

struct ToolCall {
  std::string tool_name;
  std::vector<std::pair<std::string, ArgValue>> args;  // in written order

  const ArgValue* find(std::string_view key) const;

  friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

// True for ids of the form img_<digits>.
bool looks_like_image_id(std::string_view s);

struct MemoryEntry {
  std::string image_id;
  RasterImage image;
  std::string description;
  std::optional<std::string> parent_id;
  std::optional<ToolCall> producing_action;
};

inline constexpr char kRootImageId[] = "img_0";

// Planner-owned store of every image of an episode. Ids are img_0, img_1,
// ... in insertion order; img_0 is the query image and the only root.
class ImageMemory {
 public:
  // The first entry must have no parent; every later one needs an existing
  // parent. Throws InvalidArgument or UnknownImageId.
  std::string put(RasterImage image, std::string description,
                  std::optional<std::string> parent_id = std::nullopt,
                  std::optional<ToolCall> action = std::nullopt);

  const MemoryEntry& get(std::string_view image_id) const;  // throws UnknownImageId
  bool contains(std::string_view image_id) const;
  std::size_t size() const { return entries_.size(); }
  const std::vector<MemoryEntry>& entries() const { return entries_; }

  std::vector<std::string> children(std::string_view image_id) const;
  std::size_t max_branching() const;

  // Throws SchemaError unless the parent links form one tree rooted at img_0.
  void validate_tree() const;

  // One "id: description" line per entry.
  std::string pool_listing() const;

 private:
  std::optional<std::size_t> index_of(std::string_view image_id) const;

  std::vector<MemoryEntry> entries_;
};

}  // namespace structlens::workflow
