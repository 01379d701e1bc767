#include "structlens/workflow/grammar.h"

#include <algorithm>
#include <cctype>

#include "structlens/core/annotation.h"

namespace structlens::workflow {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

enum class Keyword { thought, action, observation, final_answer };

struct Label {
  Keyword keyword;
  std::size_t start;  // first byte of the keyword
  std::size_t body;   // first byte after the colon
  std::string index;  // "1", "N" or empty
};

// Finds "KEYWORD [index]:" occurrences, in order.
std::vector<Label> scan_labels(std::string_view s) {
  static constexpr std::pair<std::string_view, Keyword> kWords[] = {
      {"THOUGHT", Keyword::thought},
      {"ACTION", Keyword::action},
      {"OBSERVATION", Keyword::observation},
      {"FINAL ANSWER", Keyword::final_answer},
  };
  std::vector<Label> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0 && is_alnum(s[i - 1])) continue;
    for (const auto& [word, kw] : kWords) {
      if (s.substr(i).starts_with(word)) {
        std::size_t k = i + word.size();
        while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
        std::string index;
        std::size_t m = k;
        while (m < s.size() && std::isdigit(static_cast<unsigned char>(s[m]))) ++m;
        if (m > k) {
          index = std::string(s.substr(k, m - k));
        } else if (k < s.size() && std::isalpha(static_cast<unsigned char>(s[k])) &&
                   kw != Keyword::final_answer) {
          m = k + 1;
          if (m < s.size() && is_alnum(s[m])) {
            m = k;
          } else {
            index = std::string(1, s[k]);
          }
        }
        while (m < s.size() && (s[m] == ' ' || s[m] == '\t')) ++m;
        if (m < s.size() && s[m] == ':') {
          out.push_back({kw, i, m + 1, index});
          i = m;
        }
        break;
      }
    }
  }
  return out;
}

// Parses a quoted string starting at s[i] (the quote). Returns false when
// the quote is never closed.
bool read_quoted(std::string_view s, std::size_t& i, std::string& out) {
  const char q = s[i++];
  out.clear();
  while (i < s.size()) {
    const char c = s[i++];
    if (c == '\\' && i < s.size()) {
      const char n = s[i++];
      out += n == 'n' ? '\n' : n;
    } else if (c == q) {
      return true;
    } else {
      out += c;
    }
  }
  return false;
}

std::optional<ToolCall> parse_call(std::string_view s, std::string& why) {
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  const std::size_t name_start = i;
  while (i < s.size() && (is_alnum(s[i]) || s[i] == '_')) ++i;
  if (i == name_start) {
    why = "ACTION does not start with a tool name";
    return std::nullopt;
  }
  ToolCall call;
  call.tool_name = std::string(s.substr(name_start, i - name_start));
  while (i < s.size() && s[i] == ' ') ++i;
  if (i >= s.size() || s[i] != '(') {
    why = "expected '(' after the tool name";
    return std::nullopt;
  }
  ++i;
  for (;;) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i >= s.size()) {
      why = "unterminated argument list";
      return std::nullopt;
    }
    if (s[i] == ')') break;
    const std::size_t key_start = i;
    while (i < s.size() && (is_alnum(s[i]) || s[i] == '_')) ++i;
    if (i == key_start) {
      why = "expected an argument name";
      return std::nullopt;
    }
    std::string key(s.substr(key_start, i - key_start));
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size() || s[i] != '=') {
      why = "expected '=' after argument " + key;
      return std::nullopt;
    }
    ++i;
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size()) {
      why = "missing value for argument " + key;
      return std::nullopt;
    }
    ArgValue value;
    if (s[i] == '"' || s[i] == '\'') {
      std::string text;
      if (!read_quoted(s, i, text)) {
        why = "unterminated string for argument " + key;
        return std::nullopt;
      }
      value = ArgValue::quoted(std::move(text));
    } else {
      const std::size_t v_start = i;
      while (i < s.size() && s[i] != ',' && s[i] != ')' && s[i] != '\n') ++i;
      std::string token = trim(s.substr(v_start, i - v_start));
      if (token.empty()) {
        why = "missing value for argument " + key;
        return std::nullopt;
      }
      if (looks_like_image_id(token)) {
        value = ArgValue::image(std::move(token));
      } else if (auto n = ArgValue::bare(token).as_number()) {
        value = ArgValue::of_number(*n);
      } else {
        value = ArgValue::bare(std::move(token));
      }
    }
    call.args.emplace_back(std::move(key), std::move(value));
    while (i < s.size() && s[i] == ' ') ++i;
    if (i < s.size() && s[i] == ',') {
      ++i;
      continue;
    }
    if (i < s.size() && s[i] == ')') break;
    why = "expected ',' or ')' in the argument list";
    return std::nullopt;
  }
  return call;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string label_text(const char* word, const std::string& index) {
  return index.empty() ? std::string(word) + ": " : std::string(word) + " " + index + ": ";
}

// Case-insensitive search from `from`; npos when absent.
std::size_t find_ci(const std::string& hay_lower, std::string_view needle_lower, std::size_t from = 0) {
  return hay_lower.find(needle_lower, from);
}

std::string strip_item(std::string_view s) {
  std::string t = trim(s);
  while (!t.empty() && (t.front() == '"' || t.front() == '\'' || t.front() == '`' || t.front() == '*')) {
    t.erase(t.begin());
  }
  while (!t.empty() && (t.back() == '"' || t.back() == '\'' || t.back() == '`' || t.back() == '*')) {
    t.pop_back();
  }
  return trim(t);
}

std::vector<std::string> split_items(std::string_view inner) {
  std::vector<std::string> items;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= inner.size(); ++i) {
    if (i == inner.size() || inner[i] == ',') {
      std::string item = strip_item(inner.substr(start, i - start));
      if (!item.empty()) items.push_back(std::move(item));
      start = i + 1;
    }
  }
  return items;
}

}  // namespace

ActionParse parse_action(std::string_view text) {
  const auto labels = scan_labels(text);
  auto end_of = [&](std::size_t li) {
    return li + 1 < labels.size() ? labels[li + 1].start : text.size();
  };
  std::optional<std::size_t> action_idx;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].keyword == Keyword::action) action_idx = i;
  }
  if (!action_idx) return ParseFailure{"no ACTION found", std::string(text)};

  ParsedAction out;
  const auto& act = labels[*action_idx];
  out.action_label = act.index;
  const std::string body = trim(text.substr(act.body, end_of(*action_idx) - act.body));
  if (body.empty()) return ParseFailure{"empty ACTION", std::string(text)};
  if (lower(body).starts_with("terminate")) {
    out.action = Terminate{};
  } else {
    std::string why;
    auto call = parse_call(body, why);
    if (!call) return ParseFailure{why, std::string(text)};
    out.action = std::move(*call);
  }
  for (std::size_t i = *action_idx; i-- > 0;) {
    if (labels[i].keyword == Keyword::thought) {
      out.thought = trim(text.substr(labels[i].body, end_of(i) - labels[i].body));
      out.thought_label = labels[i].index;
      break;
    }
  }
  for (std::size_t i = labels.size(); i-- > 0;) {
    if (labels[i].keyword == Keyword::final_answer) {
      out.final_answer = trim(text.substr(labels[i].body, end_of(i) - labels[i].body));
      break;
    }
  }
  return out;
}

std::string format_tool_call(const ToolCall& call) {
  std::string out = call.tool_name + "(";
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    const auto& [key, value] = call.args[i];
    if (i) out += ", ";
    out += key + "=";
    out += value.kind == ArgValue::Kind::text ? quote(value.text) : value.as_string();
  }
  return out + ")";
}

std::string format_action(const ParsedAction& a) {
  std::string out;
  if (a.thought) out += label_text("THOUGHT", a.thought_label) + *a.thought + "\n";
  if (a.final_answer) out += "FINAL ANSWER: " + *a.final_answer + "\n";
  out += label_text("ACTION", a.action_label);
  if (std::holds_alternative<Terminate>(a.action)) {
    out += "TERMINATE";
  } else {
    out += format_tool_call(std::get<ToolCall>(a.action));
  }
  return out;
}

Critique parse_critique(std::string_view text) {
  const std::string low = lower(text);
  std::size_t pos = find_ci(low, "adjustment");
  std::optional<bool> flag;
  std::size_t flag_begin = 0;
  std::size_t flag_end = 0;
  while (pos != std::string::npos && !flag) {
    std::size_t i = pos + 10;
    while (i < low.size() && (low[i] == ' ' || low[i] == '*')) ++i;
    if (i < low.size() && low[i] == ':') {
      ++i;
      while (i < low.size() && (low[i] == ' ' || low[i] == '*' || low[i] == '`')) ++i;
      if (low.compare(i, 4, "true") == 0) {
        flag = true;
        flag_end = i + 4;
      } else if (low.compare(i, 5, "false") == 0) {
        flag = false;
        flag_end = i + 5;
      }
      flag_begin = pos;
    }
    if (!flag) pos = find_ci(low, "adjustment", pos + 1);
  }
  if (!flag) return Critique{false, std::nullopt, kCriticUnparseable, true};

  Critique c;
  c.adjustment = *flag;
  std::string rest = std::string(text.substr(0, flag_begin)) + "\n" +
                     std::string(text.substr(flag_end));
  const std::string rest_low = lower(rest);
  std::size_t t = find_ci(rest_low, "tools");
  while (t != std::string::npos) {
    std::size_t i = t + 5;
    while (i < rest.size() && (rest[i] == ' ' || rest[i] == '*')) ++i;
    if (i < rest.size() && rest[i] == ':') {
      ++i;
      while (i < rest.size() && rest[i] == ' ') ++i;
      if (i < rest.size() && rest[i] == '[') {
        const std::size_t close = rest.find(']', i);
        if (close != std::string::npos) {
          if (c.adjustment) c.tools = split_items(std::string_view(rest).substr(i + 1, close - i - 1));
          rest.erase(t, close + 1 - t);
          break;
        }
      }
    }
    t = find_ci(rest_low, "tools", t + 1);
  }
  // Drop leftover markup around the removed verdict.
  std::string s = trim(rest);
  while (!s.empty() && (s.front() == '*' || s.front() == '`')) s = trim(s.substr(1));
  c.suggestions = s;
  return c;
}

std::string format_critique(const Critique& c) {
  if (c.unparseable) return c.suggestions;
  std::string out = std::string("ADJUSTMENT: ") + (c.adjustment ? "True" : "False");
  if (c.tools) {
    out += "\ntools: [";
    for (std::size_t i = 0; i < c.tools->size(); ++i) {
      if (i) out += ", ";
      out += (*c.tools)[i];
    }
    out += "]";
  }
  if (!c.suggestions.empty()) out += "\n" + c.suggestions;
  return out;
}

std::optional<std::vector<std::string>> parse_bracket_list(std::string_view text) {
  const std::size_t close = text.rfind(']');
  if (close == std::string_view::npos) return std::nullopt;
  const std::size_t open = text.rfind('[', close);
  if (open == std::string_view::npos) return std::nullopt;
  return split_items(text.substr(open + 1, close - open - 1));
}

std::optional<bool> parse_verdict(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
    const std::string word = lower(text.substr(start, i - start));
    if (word == "true") return true;
    if (word == "false") return false;
  }
  return std::nullopt;
}

}  // namespace structlens::workflow
