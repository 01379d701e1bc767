#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "structlens/workflow/memory.h"

namespace structlens::workflow {

struct Terminate {
  friend bool operator==(const Terminate&, const Terminate&) = default;
};

// One planner turn: "THOUGHT n: ...", optional "FINAL ANSWER: ...", and
// "ACTION n: tool(key=value, ...)" or "ACTION n: TERMINATE".
struct ParsedAction {
  std::optional<std::string> thought;
  std::string thought_label;  // the "n" after THOUGHT, may be empty
  std::variant<ToolCall, Terminate> action;
  std::string action_label;
  std::optional<std::string> final_answer;

  friend bool operator==(const ParsedAction&, const ParsedAction&) = default;
};

struct ParseFailure {
  std::string reason;
  std::string text;
};

using ActionParse = std::variant<ParsedAction, ParseFailure>;

// Total: never throws. Uses the last ACTION in the text and the last THOUGHT
// before it.
ActionParse parse_action(std::string_view text);

std::string format_tool_call(const ToolCall& call);
std::string format_action(const ParsedAction& a);

// Planning-critic verdict.
struct Critique {
  bool adjustment = false;
  std::optional<std::vector<std::string>> tools;  // only with adjustment
  std::string suggestions;
  bool unparseable = false;

  friend bool operator==(const Critique&, const Critique&) = default;
};

inline constexpr char kCriticUnparseable[] = "critic-unparseable";

// Total. Missing ADJUSTMENT yields {false, none, "critic-unparseable"}.
Critique parse_critique(std::string_view text);
std::string format_critique(const Critique& c);

// Contents of the last [a, b, c] list in the text; nullopt when there is none.
std::optional<std::vector<std::string>> parse_bracket_list(std::string_view text);

// First standalone true/false word, case-insensitive.
std::optional<bool> parse_verdict(std::string_view text);

}  // namespace structlens::workflow
