#include "structlens/cli/config.h"

#include <charconv>
#include <sstream>

#include "structlens/core/errors.h"
#include "structlens/core/png_io.h"

namespace structlens::cli {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

template <typename T>
T parse_value(const std::string& section, const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw SchemaError("config [" + section + "] " + key + ": expected a number, got \"" + v + "\"");
  }
  return out;
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw SchemaError("config [" + section + "] " + key + ": expected true or false");
}

void apply_endpoint(EndpointConfig& e, const std::string& section, const std::string& key,
                    const std::string& v) {
  if (key == "endpoint" || key == "url") {
    e.url = v;
  } else if (key == "model") {
    e.model = v;
  } else if (key == "token_env") {
    e.token_env = v;
  } else if (key == "timeout") {
    e.timeout_seconds = parse_value<int>(section, key, v);
  } else if (key == "retries") {
    e.retries = parse_value<int>(section, key, v);
  } else {
    throw SchemaError("config [" + section + "]: unknown key " + key);
  }
}

}  // namespace

IniTable parse_ini(std::string_view text) {
  IniTable table;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw SchemaError("config line " + std::to_string(line_no) + ": bad section");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw SchemaError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (const std::size_t hash = value.find(" #"); hash != std::string::npos) {
      value = trim(std::string_view(value).substr(0, hash));
    }
    if (key.empty()) throw SchemaError("config line " + std::to_string(line_no) + ": empty key");
    table[section][key] = value;
  }
  return table;
}

Config config_from_ini(const IniTable& table) {
  Config c;
  for (const auto& [section, entries] : table) {
    for (const auto& [key, v] : entries) {
      if (section == "grounding") {
        if (key == "mode") {
          if (v != "oracle" && v != "remote") throw SchemaError("grounding mode must be oracle or remote");
          c.grounding_mode = v;
        } else {
          apply_endpoint(c.grounding, section, key, v);
        }
      } else if (section == "agents") {
        if (key == "vision") {
          c.agents_vision = parse_bool(section, key, v);
        } else {
          apply_endpoint(c.agents, section, key, v);
        }
      } else if (section == "judge") {
        apply_endpoint(c.judge, section, key, v);
      } else if (section == "tools" && key == "tau") {
        c.tau = parse_value<double>(section, key, v);
      } else if (section == "tools" && key == "magnify_scale") {
        c.magnify_scale = parse_value<double>(section, key, v);
      } else if (section == "workflow" && key == "max_steps") {
        c.max_steps = parse_value<int>(section, key, v);
      } else if (section == "workflow" && key == "max_rounds") {
        c.max_rounds = parse_value<int>(section, key, v);
      } else if (section == "synth" && key == "seed") {
        c.seed = parse_value<std::uint64_t>(section, key, v);
      } else if (section == "prompts" && key == "dir") {
        c.prompt_dir = v;
      } else {
        throw SchemaError("config: unknown key " + (section.empty() ? key : section + "." + key));
      }
    }
  }
  return c;
}

Config load_config(const std::filesystem::path& path) { return config_from_ini(parse_ini(read_text(path))); }

}  // namespace structlens::cli
