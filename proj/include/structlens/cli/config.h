#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace structlens::cli {

// section -> key -> raw value. Keys before any [section] land in "".
using IniTable = std::map<std::string, std::map<std::string, std::string>>;

// "[section]" headers, "key = value" lines, '#' or ';' comments, optional
// double quotes around values. Throws SchemaError with the line number.
IniTable parse_ini(std::string_view text);

struct EndpointConfig {
  std::string url;
  std::string model;
  std::string token_env = "STRUCTLENS_API_TOKEN";
  int timeout_seconds = 60;
  int retries = 2;
};

struct Config {
  std::string grounding_mode = "oracle";  // oracle | remote
  EndpointConfig grounding;
  EndpointConfig agents;
  bool agents_vision = true;
  EndpointConfig judge;
  double tau = 30.0;
  double magnify_scale = 2.0;
  int max_steps = 10;
  int max_rounds = 3;
  std::uint64_t seed = 42;
  std::optional<std::filesystem::path> prompt_dir;
};

// Applies a parsed file on top of the defaults. Unknown keys are errors.
Config config_from_ini(const IniTable& table);
Config load_config(const std::filesystem::path& path);

}  // namespace structlens::cli
