#include "structlens/grounding/prompt.h"

#include <algorithm>
#include <cctype>
#include <regex>

namespace structlens::grounding {

namespace {

constexpr auto kFlags = std::regex::icase | std::regex::ECMAScript;

const std::regex& panel_regex() {
  static const std::regex re(
      R"((?:\s*\b(?:of|in|for|from)\s+)?(?:the\s+)?(?:subplot|subfigure|sub-figure|panel|chart)\s+(?:at|in|on)\s+row\s*~?\s*(\d+)\s*,?\s*(?:and\s+)?col(?:umn)?\s*~?\s*(\d+))",
      kFlags);
  return re;
}

std::string trim(std::string s) {
  const auto is_junk = [](unsigned char c) { return std::isspace(c) || c == '.' || c == '?'; };
  while (!s.empty() && is_junk(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

std::string strip_article(const std::string& s) {
  static const std::regex re(R"(^(?:the|a|an)\s+)", kFlags);
  return std::regex_replace(s, re, "");
}

std::string unquote(std::string s) {
  s = trim(std::move(s));
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

}  // namespace

ElementRef parse_element_prompt(std::string_view prompt) {
  ElementRef ref;
  ref.text = std::string(prompt);
  std::string rest = ref.text;

  std::smatch m;
  if (std::regex_search(rest, m, panel_regex())) {
    ref.panel = GridPos{std::stoi(m[1].str()), std::stoi(m[2].str())};
    rest = m.prefix().str() + " " + m.suffix().str();
  }
  rest = strip_article(trim(rest));

  static const std::regex subplot_re(R"(^(?:subplot|subfigure|sub-figure|panel|plot)?$)", kFlags);
  static const std::regex tick_re(
      R"(^(?:axis\s+)?tick(?:\s+mark)?\s+(?:at\s+|value\s+|for\s+)?([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s+(?:on|of|along)\s+(?:the\s+)?([xy])[- ]?axis$)",
      kFlags);
  static const std::regex tick_alt_re(
      R"(^([xy])[- ]?axis\s+tick(?:\s+mark)?\s+(?:at\s+|value\s+|for\s+)?([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)$)",
      kFlags);
  static const std::regex point_re(R"(^point\s+([A-Za-z][A-Za-z0-9_']*)$)", kFlags);
  static const std::regex entry_re(
      R"(^legend\s+(?:entry|item)(?:\s+for)?\s+(.+)$)", kFlags);
  static const std::regex legend_re(R"(^legend$)", kFlags);
  static const std::regex title_re(R"(^(?:chart\s+|plot\s+)?title$)", kFlags);
  static const std::regex axis_label_re(R"(^([xy])[- ]?(?:axis\s+)?label$)", kFlags);

  if (std::regex_match(rest, m, tick_re)) {
    ref.category = ElementCategory::axis_tick;
    ref.value = std::stod(m[1].str());
    ref.axis = static_cast<char>(std::tolower(static_cast<unsigned char>(m[2].str()[0])));
  } else if (std::regex_match(rest, m, tick_alt_re)) {
    ref.category = ElementCategory::axis_tick;
    ref.axis = static_cast<char>(std::tolower(static_cast<unsigned char>(m[1].str()[0])));
    ref.value = std::stod(m[2].str());
  } else if (std::regex_match(rest, m, point_re)) {
    ref.category = ElementCategory::geom_point;
    ref.label = m[1].str();
  } else if (std::regex_match(rest, m, entry_re)) {
    ref.category = ElementCategory::legend_region;
    ref.label = unquote(m[1].str());
  } else if (std::regex_match(rest, legend_re)) {
    ref.category = ElementCategory::legend_region;
  } else if (std::regex_match(rest, title_re)) {
    ref.category = ElementCategory::text_label;
    ref.text_role = TextRole::title;
  } else if (std::regex_match(rest, m, axis_label_re)) {
    ref.category = ElementCategory::text_label;
    ref.text_role = std::tolower(static_cast<unsigned char>(m[1].str()[0])) == 'x'
                        ? TextRole::x_label
                        : TextRole::y_label;
  } else if (std::regex_match(rest, subplot_re) && (ref.panel || !rest.empty())) {
    ref.category = ElementCategory::subplot;
  }
  return ref;
}

std::string subplot_prompt(GridPos pos) {
  return "the subplot at row " + std::to_string(pos.row) + ", column " + std::to_string(pos.col);
}

std::string canonical_prompt(const ElementAnnotation& a) {
  const auto [panel, local] = split_element_id(a.element_id);
  const std::string suffix = panel ? " of " + subplot_prompt(*panel) : "";
  switch (a.category) {
    case ElementCategory::subplot:
      if (a.grid_pos) return subplot_prompt(*a.grid_pos);
      return panel ? subplot_prompt(*panel) : "the subplot";
    case ElementCategory::legend_region:
      if (a.label_text && local.starts_with("legend_entry/")) {
        return "the legend entry \"" + *a.label_text + "\"" + suffix;
      }
      return "the legend" + suffix;
    case ElementCategory::text_label:
      if (local == "x_label") return "the x-axis label" + suffix;
      if (local == "y_label") return "the y-axis label" + suffix;
      return "the title" + suffix;
    case ElementCategory::axis_tick: {
      const char axis = local.starts_with("y_tick") ? 'y' : 'x';
      return "tick " + format_number(a.axis_value.value_or(0.0)) + " on the " +
             std::string(1, axis) + " axis" + suffix;
    }
    case ElementCategory::geom_point: {
      std::string label = a.label_text.value_or("");
      if (label.empty() && local.starts_with("point/")) label = std::string(local.substr(6));
      return "point " + label;
    }
  }
  return a.element_id;
}

}  // namespace structlens::grounding
