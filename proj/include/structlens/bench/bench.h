#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "structlens/workflow/engine.h"

namespace structlens::bench {

struct BenchItem {
  std::string id;
  std::filesystem::path image;
  std::string question;
  std::string gold_answer;
  std::optional<std::filesystem::path> annotations;
  std::optional<std::filesystem::path> script;  // per-item scripted replies
};

// JSON Lines: {id, image, question, answer, annotations?, script?}. Relative
// paths resolve against the items file's directory.
std::vector<BenchItem> read_items(const std::filesystem::path& path);

enum class JudgeMode { offline, remote };

// Trim, lowercase, drop thousands separators, currency signs, percent signs
// and trailing unit words.
std::string normalize_answer(std::string_view s);

struct JudgeVerdict {
  bool correct = false;
  bool flagged = false;  // remote reply could not be read
};

// Offline: normalized strings equal, or both parse as numbers that are
// exactly equal. Remote: the judge template, true/false reply.
JudgeVerdict judge_answer(const std::string& pred, const std::string& gold, JudgeMode mode,
                          workflow::AgentBackend* judge = nullptr,
                          const std::string& question = {},
                          const prompts::PromptSet& prompts = {});

struct ItemResult {
  std::string id;
  std::string predicted;
  bool correct = false;
  int rounds_used = 0;
  bool judge_flagged = false;
  std::optional<std::string> error;
  std::vector<bool> identified;     // per round: critic asked to adjust
  std::vector<bool> round_correct;  // per round: that round's answer judged correct
};

struct CriticRound {
  int round = 0;
  int identified = 0;
  int tp = 0;
  int fp = 0;
};

struct BenchReport {
  double accuracy = 0.0;
  std::vector<ItemResult> per_item;  // sorted by id
  std::vector<CriticRound> critic_rounds;
  int flagged = 0;
  int errors = 0;
};

// Backends owned by one item's run.
struct ItemSystem {
  std::unique_ptr<workflow::AgentBackend> agents;
  std::unique_ptr<grounding::GroundingBackend> grounding;
  workflow::AgentBackend* judge = nullptr;  // optional, remote judge mode
};

using SystemFactory = std::function<ItemSystem(const BenchItem&)>;

struct BenchConfig {
  workflow::WorkflowConfig workflow{};
  JudgeMode judge = JudgeMode::offline;
  unsigned concurrency = 1;
  prompts::PromptSet prompts{};
};

// Tally of one item from its refinement rounds.
ItemResult score_item(const BenchItem& item, const workflow::RefineResult& run, JudgeMode mode,
                      workflow::AgentBackend* judge, const prompts::PromptSet& prompts);

// Reduces item results keyed by id; independent of input order.
BenchReport assemble_report(std::vector<ItemResult> items);

BenchReport run_benchmark(const std::vector<BenchItem>& items, const workflow::ToolRegistry& registry,
                          const SystemFactory& factory, const BenchConfig& config);

// Aligned text tables.
std::string summarize_text(const BenchReport& report);
nlohmann::ordered_json to_json(const BenchReport& report);

}  // namespace structlens::bench
