#include "structlens/core/prompts.h"

#include <algorithm>
#include <array>
#include <utility>

#include "structlens/core/errors.h"
#include "structlens/core/png_io.h"

namespace structlens::prompts {

namespace {

// Generated at configure time from data/prompts.
#include "structlens_prompt_data.inc"

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : kBuiltinPrompts) names.emplace_back(name);
  return names;
}

std::string_view builtin(std::string_view name) {
  for (const auto& [n, text] : kBuiltinPrompts) {
    if (n == name) return text;
  }
  throw InvalidArgument("unknown prompt template '" + std::string(name) + "'");
}

std::string render(std::string_view tmpl, const std::map<std::string, std::string>& slots) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find("<|", pos);
    if (open == std::string_view::npos) break;
    const auto close = tmpl.find("|>", open + 2);
    if (close == std::string_view::npos) break;
    const std::string name(tmpl.substr(open + 2, close - open - 2));
    out.append(tmpl.substr(pos, open - pos));
    if (auto it = slots.find(name); it != slots.end()) {
      out += it->second;
    } else {
      out.append(tmpl.substr(open, close + 2 - open));
    }
    pos = close + 2;
  }
  out.append(tmpl.substr(pos));
  return out;
}

PromptSet::PromptSet(const std::filesystem::path& dir) {
  for (const auto& name : builtin_names()) {
    const auto file = dir / (name + ".txt");
    if (std::filesystem::exists(file)) overrides_[name] = read_text(file);
  }
}

std::string PromptSet::get(std::string_view name) const {
  if (auto it = overrides_.find(name); it != overrides_.end()) return it->second;
  return std::string(builtin(name));
}

}  // namespace structlens::prompts
