#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace structlens::prompts {

// Names of the templates compiled in from data/prompts/*.txt.
std::vector<std::string> builtin_names();

// Throws InvalidArgument for an unknown name.
std::string_view builtin(std::string_view name);

// Replaces every "<|slot|>" whose name is in `slots`. Unknown slot markers are
// left as they are.
std::string render(std::string_view tmpl, const std::map<std::string, std::string>& slots);

// Built-in templates with optional per-file overrides from a directory.
class PromptSet {
 public:
  PromptSet() = default;
  // Any "<name>.txt" in `dir` replaces the built-in of that name.
  explicit PromptSet(const std::filesystem::path& dir);

  std::string get(std::string_view name) const;

 private:
  std::map<std::string, std::string, std::less<>> overrides_;
};

}  // namespace structlens::prompts
