#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "structlens/charttools/chart_tools.h"
#include "structlens/grounding/backend.h"
#include "structlens/workflow/memory.h"

namespace structlens::workflow {

struct ToolParam {
  std::string name;
  std::string type;  // "image_id", "string", "number", "enum{...}"
  bool required = true;
};

struct ToolSettings {
  double tau = tools::kDefaultTau;
  double magnify_scale = 2.0;
  tools::LineStyle line_style{};
};

struct ToolEnv {
  const ImageMemory& memory;
  grounding::GroundingBackend& grounding;
  const ToolSettings& settings;
};

// What a tool produced: a derived image of `input_image`, or plain text.
struct ToolResult {
  std::string input_image;
  std::optional<tools::ToolOutput> output;
  std::string text;
};

using ToolHandler = std::function<ToolResult(const ToolCall&, const ToolEnv&)>;

struct ToolSpec {
  std::string name;      // display name used in tool lists
  std::string function;  // name used in ACTION lines
  std::string description;
  std::vector<ToolParam> params;
  ToolHandler handler;
};

// {name, function, params:[{name, type, required}], description}
nlohmann::ordered_json signature_json(const ToolSpec& spec);

class ToolRegistry {
 public:
  void add(ToolSpec spec);

  // Matches the display name or the function name, ignoring case.
  const ToolSpec* find(std::string_view name) const;

  // Registered tools named in `names`, in that order, without duplicates.
  // Unknown names are dropped.
  ToolRegistry subset(const std::vector<std::string>& names) const;

  std::vector<std::string> names() const;
  const std::vector<ToolSpec>& specs() const { return specs_; }
  bool empty() const { return specs_.empty(); }
  std::size_t size() const { return specs_.size(); }

  // One signature JSON object per line; the text of the tool_descriptions slot.
  std::string describe() const;

 private:
  std::vector<ToolSpec> specs_;
};

// The eight built-in tools: four chart tools, three geometry tools and the
// numeric computation tool.
ToolRegistry default_registry();

}  // namespace structlens::workflow
