#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "structlens/core/prompts.h"
#include "structlens/workflow/agents.h"
#include "structlens/workflow/grammar.h"
#include "structlens/workflow/registry.h"

namespace structlens::workflow {

struct WorkflowConfig {
  int max_steps = 10;
  int format_retries = 2;
  int max_rounds = 3;
  bool record_prompts = false;  // keep rendered prompts in the trace
  ToolSettings tools{};
};

struct Workflow {
  Agents agents;
  grounding::GroundingBackend* grounding = nullptr;
  const ToolRegistry* registry = nullptr;  // the full registry
  WorkflowConfig config{};
  prompts::PromptSet prompts{};
};

struct DispatchResult {
  std::vector<std::string> selected;  // registry display names, in order
  bool fallback = false;              // keyword table used
  std::string raw_reply;
};

// Keyword rules used when the dispatcher reply holds no bracketed list.
std::vector<std::string> fallback_tool_selection(const std::string& question,
                                                 const ToolRegistry& registry);

DispatchResult dispatch(const Workflow& wf, const std::string& question, const RasterImage& image,
                        const ToolRegistry& registry);

enum class CriticMode { goal_satisfaction, answerability };

struct CriticVerdict {
  CriticMode mode = CriticMode::goal_satisfaction;
  bool pass = true;
  std::string reason;
};

// Fails open: an unreadable reply passes with reason "critic-unparseable".
CriticVerdict visual_critic_check(const Workflow& wf, const RasterImage& image,
                                  const std::string& image_id, const std::string& text,
                                  CriticMode mode);

struct NoOp {
  friend bool operator==(const NoOp&, const NoOp&) = default;
};

using StepAction = std::variant<ToolCall, Terminate, NoOp>;

struct TraceStep {
  int index = 0;
  std::string thought;
  StepAction action;
  std::string observation;
  std::vector<std::string> images_in;
  std::vector<std::string> images_out;
  std::vector<std::string> planner_images;  // pixels shown to the planner
  std::optional<CriticVerdict> critic;
  int format_retries = 0;
  std::string planner_reply;
  std::optional<std::string> prompt;
};

struct MemorySummary {
  std::string image_id;
  std::optional<std::string> parent_id;
  std::string description;
  std::uint64_t hash = 0;
  int width = 0;
  int height = 0;
};

struct Trace {
  std::vector<TraceStep> steps;
  std::optional<std::string> final_answer;
  bool budget_exhausted = false;
  std::vector<MemorySummary> memory;
};

// `memory` must already hold the query image as img_0.
Trace run_episode(const Workflow& wf, const std::string& question, ImageMemory& memory,
                  const ToolRegistry& tools, const std::vector<std::string>& suggestions = {});

// Text of the steps as the planner and critic see them.
std::string history_text(const Trace& trace);

Critique planning_critic_review(const Workflow& wf, const std::string& question,
                                const RasterImage& image, const Trace& trace,
                                const ToolRegistry& tools);

struct RoundRecord {
  int round = 0;
  std::vector<std::string> tools;
  std::optional<DispatchResult> dispatch;
  std::vector<std::string> suggestions_in;
  Trace trace;
  Critique critique;
};

struct RefineResult {
  std::vector<RoundRecord> rounds;
  std::optional<std::string> final_answer;
  int rounds_used() const { return static_cast<int>(rounds.size()); }
};

// Dispatch once, then episode + review per round until the critic asks for
// no adjustment or max_rounds is reached. Later rounds use the critic's tool
// list when it gives one; suggestions accumulate across rounds.
RefineResult refine_loop(const Workflow& wf, const std::string& question, const RasterImage& image);

nlohmann::ordered_json to_json(const Trace& trace);
nlohmann::ordered_json to_json(const RefineResult& result, const std::string& question);

}  // namespace structlens::workflow
