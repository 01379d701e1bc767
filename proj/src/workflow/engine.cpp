#include "structlens/workflow/engine.h"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "structlens/core/annotation.h"
#include "structlens/core/errors.h"

namespace structlens::workflow {

namespace {

constexpr char kFormatReminder[] =
    "Your reply did not follow the required format. Answer with\n"
    "THOUGHT N: [Analysis]\n"
    "ACTION N: tool_name(key=value)\n"
    "or, when the answer is known, FINAL ANSWER: [answer] followed by ACTION N: TERMINATE.";

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string_view to_string(CriticMode m) {
  return m == CriticMode::goal_satisfaction ? "goal_satisfaction" : "answerability";
}

std::string format_step_action(const StepAction& a) {
  if (const auto* call = std::get_if<ToolCall>(&a)) return format_tool_call(*call);
  if (std::holds_alternative<Terminate>(a)) return "TERMINATE";
  return "(no valid action)";
}

std::string suggestion_block(const std::vector<std::string>& suggestions) {
  if (suggestions.empty()) return "";
  std::string out = "\nSuggestions from earlier reviews:\n";
  for (const auto& s : suggestions) out += "- " + s + "\n";
  return out;
}

void add_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

std::vector<MemorySummary> summarize(const ImageMemory& memory) {
  std::vector<MemorySummary> out;
  for (const auto& e : memory.entries()) {
    out.push_back({e.image_id, e.parent_id, e.description, content_hash(e.image), e.image.width(),
                   e.image.height()});
  }
  return out;
}

bool is_reasoner_call(const ToolCall& call) { return lower(call.tool_name) == "reasoner"; }

}  // namespace

std::vector<std::string> fallback_tool_selection(const std::string& question,
                                                 const ToolRegistry& registry) {
  struct Rule {
    const char* tool;
    std::vector<const char*> keywords;
  };
  static const std::vector<Rule> kRules = {
      {"Subfigure_Cropping", {"subplot", "subfigure", "sub-figure", "panel", "row", "column"}},
      {"Region_Magnification", {"zoom", "magnif", "precise", "exact value", "between", "small"}},
      {"Auxiliary_Line", {"threshold", "above", "below", "exceed", "higher than", "lower than",
                          "greater than", "less than", "reference line"}},
      {"Legend_Masking", {"series", "legend", "overlap", "only the"}},
      {"Point_Connection", {"connect", "segment", "diagonal", "join"}},
      {"Perpendicular_Construction", {"perpendicular", "altitude", "distance from", "height of"}},
      {"Parallel_Construction", {"parallel"}},
      {"Numeric_Computation", {"compute", "calculate", "sum", "difference", "ratio", "area",
                               "length", "angle", "average", "how much", "how many", "total"}},
  };
  const std::string q = lower(question);
  std::vector<std::string> chosen;
  for (const auto& rule : kRules) {
    const bool hit = std::any_of(rule.keywords.begin(), rule.keywords.end(),
                                 [&](const char* k) { return q.find(k) != std::string::npos; });
    if (hit) chosen.emplace_back(rule.tool);
  }
  std::vector<std::string> out;
  for (const auto& spec : registry.specs()) {
    if (std::find(chosen.begin(), chosen.end(), spec.name) != chosen.end()) out.push_back(spec.name);
  }
  return out;
}

DispatchResult dispatch(const Workflow& wf, const std::string& question, const RasterImage& image,
                        const ToolRegistry& registry) {
  if (registry.empty()) throw InvalidArgument("dispatch needs a non-empty tool registry");
  AgentRequest req{roles::kDispatcher, {},
                   prompts::render(wf.prompts.get("dispatcher"),
                                   {{"tool_descriptions", registry.describe()}, {"question", question}}),
                   {kRootImageId}, {image}};
  DispatchResult out;
  out.raw_reply = wf.agents.dispatcher->complete(req);
  if (auto list = parse_bracket_list(out.raw_reply)) {
    for (const auto& name : *list) {
      if (const ToolSpec* s = registry.find(name)) add_unique(out.selected, s->name);
    }
    return out;
  }
  out.fallback = true;
  out.selected = fallback_tool_selection(question, registry);
  return out;
}

CriticVerdict visual_critic_check(const Workflow& wf, const RasterImage& image,
                                  const std::string& image_id, const std::string& text,
                                  CriticMode mode) {
  AgentRequest req{roles::kVisualCritic, {},
                   prompts::render(wf.prompts.get("visual_critic"), {{"question", text}}),
                   {image_id}, {image}};
  const std::string reply = wf.agents.visual_critic->complete(req);
  const auto verdict = parse_verdict(reply);
  if (!verdict) return {mode, true, kCriticUnparseable};
  std::string reason = reply;
  while (!reason.empty() && std::isspace(static_cast<unsigned char>(reason.back()))) reason.pop_back();
  return {mode, *verdict, reason};
}

std::string history_text(const Trace& trace) {
  std::string out;
  for (const auto& s : trace.steps) {
    const std::string n = std::to_string(s.index);
    out += "THOUGHT " + n + ": " + s.thought + "\n";
    out += "ACTION " + n + ": " + format_step_action(s.action) + "\n";
    out += "OBSERVATION " + n + ": " + s.observation + "\n";
  }
  return out;
}

Trace run_episode(const Workflow& wf, const std::string& question, ImageMemory& memory,
                  const ToolRegistry& tools, const std::vector<std::string>& suggestions) {
  if (memory.size() == 0) throw InvalidArgument("episode memory must hold the query image");
  Trace trace;
  std::optional<std::string> last_reasoner;
  std::vector<std::string> show{kRootImageId};
  const ToolEnv env{memory, *wf.grounding, wf.config.tools};

  for (int step = 1; step <= wf.config.max_steps; ++step) {
    TraceStep rec;
    rec.index = step;
    rec.planner_images = show;

    const std::string prompt = prompts::render(
        wf.prompts.get("planner"),
        {{"image", "<image>"},
         {"image_path", kRootImageId},
         {"question", question},
         {"tool_descriptions", tools.describe()},
         {"image_pool", memory.pool_listing()},
         {"suggestions", suggestion_block(suggestions)},
         {"history", history_text(trace)}});
    AgentRequest req{roles::kPlanner, {}, prompt, {}, {}};
    for (const auto& id : show) {
      req.image_ids.push_back(id);
      req.images.push_back(memory.get(id).image);
    }
    if (wf.config.record_prompts) rec.prompt = prompt;

    std::optional<ParsedAction> parsed;
    for (int attempt = 0; attempt <= wf.config.format_retries; ++attempt) {
      if (attempt > 0) {
        ++rec.format_retries;
        req.user = prompt + "\nOBSERVATION: " + kFormatReminder + "\n";
      }
      rec.planner_reply = wf.agents.planner->complete(req);
      auto result = parse_action(rec.planner_reply);
      if (auto* ok = std::get_if<ParsedAction>(&result)) {
        parsed = std::move(*ok);
        break;
      }
    }

    std::vector<std::string> next_show;
    if (!parsed) {
      rec.action = NoOp{};
      rec.observation = "The planner reply could not be parsed after " +
                        std::to_string(wf.config.format_retries) +
                        " format reminders; the step was skipped.";
      trace.steps.push_back(std::move(rec));
      show = next_show;
      continue;
    }
    rec.thought = parsed->thought.value_or("");

    if (std::holds_alternative<Terminate>(parsed->action)) {
      rec.action = Terminate{};
      rec.observation = "Terminated.";
      trace.final_answer = parsed->final_answer ? parsed->final_answer : last_reasoner;
      trace.steps.push_back(std::move(rec));
      trace.memory = summarize(memory);
      return trace;
    }

    const ToolCall call = std::get<ToolCall>(parsed->action);
    rec.action = call;
    for (const auto& [key, value] : call.args) {
      if (value.kind == ArgValue::Kind::image_id && memory.contains(value.text)) {
        add_unique(rec.images_in, value.text);
      }
    }
    next_show = rec.images_in;

    if (is_reasoner_call(call)) {
      const ArgValue* q = call.find("question");
      const ArgValue* img = call.find("image");
      const std::string image_id = img ? img->as_string() : std::string(kRootImageId);
      if (!q || q->as_string().empty()) {
        rec.observation = "Error: reasoner needs a question argument.";
      } else if (!memory.contains(image_id)) {
        rec.observation = "Error (UnknownImageId): no image with id " + image_id + ".";
      } else {
        add_unique(rec.images_in, image_id);
        const auto& entry = memory.get(image_id);
        rec.critic = visual_critic_check(wf, entry.image, image_id, q->as_string(),
                                         CriticMode::answerability);
        if (!rec.critic->pass) {
          rec.observation = "Error alert: " + image_id +
                            " does not hold enough information to answer the question (" +
                            rec.critic->reason + ").";
        } else {
          AgentRequest rreq{roles::kReasoner, wf.prompts.get("reasoner_system"),
                            prompts::render(wf.prompts.get("reasoner_user"),
                                            {{"question", q->as_string()}}),
                            {image_id}, {entry.image}};
          last_reasoner = wf.agents.reasoner->complete(rreq);
          rec.observation = *last_reasoner;
        }
      }
    } else if (const ToolSpec* spec = tools.find(call.tool_name)) {
      try {
        ToolResult result = spec->handler(call, env);
        if (result.output) {
          auto& out = *result.output;
          const std::string goal = rec.thought.empty() ? out.description : rec.thought;
          rec.critic = visual_critic_check(wf, out.image, "candidate", goal,
                                           CriticMode::goal_satisfaction);
          if (!rec.critic->pass) {
            rec.observation = "Error alert: the output of " + spec->function +
                              " did not satisfy the goal (" + rec.critic->reason +
                              "); the image was discarded.";
          } else {
            const std::string id = memory.put(out.image, out.description, result.input_image, call);
            wf.grounding->on_derived_image(id, result.input_image, out.transform, out.added);
            rec.images_out.push_back(id);
            next_show.push_back(id);
            rec.observation = out.description + ". Stored as " + id + ".";
            if (!out.note.empty()) rec.observation += " " + out.note + ".";
          }
        } else {
          rec.observation = "Result: " + result.text;
        }
      } catch (const Error& e) {
        rec.observation = "Error (" + e.kind() + "): " + e.what();
      }
    } else {
      rec.observation = "Error: unknown tool '" + call.tool_name + "'. Available tools: ";
      const auto names = tools.names();
      for (std::size_t i = 0; i < names.size(); ++i) {
        rec.observation += (i ? ", " : "") + names[i];
      }
      if (names.empty()) rec.observation += "none (use reasoner)";
      rec.observation += ".";
    }
    trace.steps.push_back(std::move(rec));
    show = next_show;
  }
  trace.budget_exhausted = true;
  trace.memory = summarize(memory);
  return trace;
}

Critique planning_critic_review(const Workflow& wf, const std::string& question,
                                const RasterImage& image, const Trace& trace,
                                const ToolRegistry& tools) {
  std::string plan = history_text(trace);
  plan += trace.final_answer ? "FINAL ANSWER: " + *trace.final_answer + "\n"
                             : std::string("No final answer (step budget exhausted).\n");
  AgentRequest req{roles::kPlanningCritic, {},
                   prompts::render(wf.prompts.get("planning_critic"),
                                   {{"tool_descriptions", tools.describe()},
                                    {"question", question},
                                    {"current_plan", plan}}),
                   {kRootImageId}, {image}};
  Critique c = parse_critique(wf.agents.planning_critic->complete(req));
  if (c.tools) {
    std::vector<std::string> known;
    for (const auto& name : *c.tools) {
      if (const ToolSpec* s = wf.registry->find(name)) add_unique(known, s->name);
    }
    c.tools = std::move(known);
  }
  return c;
}

RefineResult refine_loop(const Workflow& wf, const std::string& question, const RasterImage& image) {
  if (wf.config.max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
  RefineResult result;
  std::vector<std::string> tool_names;
  std::vector<std::string> suggestions;
  for (int round = 1; round <= wf.config.max_rounds; ++round) {
    RoundRecord rec;
    rec.round = round;
    if (round == 1) {
      rec.dispatch = dispatch(wf, question, image, *wf.registry);
      tool_names = rec.dispatch->selected;
    }
    rec.tools = tool_names;
    rec.suggestions_in = suggestions;
    const ToolRegistry tools = wf.registry->subset(tool_names);
    ImageMemory memory;
    memory.put(image, "original query image");
    rec.trace = run_episode(wf, question, memory, tools, suggestions);
    memory.validate_tree();
    rec.critique = planning_critic_review(wf, question, image, rec.trace, tools);
    result.final_answer = rec.trace.final_answer;
    const bool again = rec.critique.adjustment && round < wf.config.max_rounds;
    if (rec.critique.adjustment) {
      if (rec.critique.tools) tool_names = *rec.critique.tools;
      if (!rec.critique.suggestions.empty()) suggestions.push_back(rec.critique.suggestions);
    }
    result.rounds.push_back(std::move(rec));
    if (!again) break;
  }
  return result;
}

nlohmann::ordered_json to_json(const Trace& trace) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : trace.steps) {
    nlohmann::ordered_json j;
    j["index"] = s.index;
    j["thought"] = s.thought;
    if (const auto* call = std::get_if<ToolCall>(&s.action)) {
      nlohmann::ordered_json args = nlohmann::ordered_json::object();
      for (const auto& [k, v] : call->args) {
        if (v.kind == ArgValue::Kind::number) {
          args[k] = v.number;
        } else {
          args[k] = v.text;
        }
      }
      j["action"] = {{"type", "tool_call"}, {"tool", call->tool_name}, {"args", std::move(args)},
                     {"text", format_tool_call(*call)}};
    } else if (std::holds_alternative<Terminate>(s.action)) {
      j["action"] = {{"type", "terminate"}};
    } else {
      j["action"] = {{"type", "no_op"}};
    }
    j["observation"] = s.observation;
    j["images_in"] = s.images_in;
    j["images_out"] = s.images_out;
    j["planner_images"] = s.planner_images;
    if (s.critic) {
      j["critic"] = {{"mode", std::string(to_string(s.critic->mode))},
                     {"pass", s.critic->pass},
                     {"reason", s.critic->reason}};
    }
    j["format_retries"] = s.format_retries;
    j["planner_reply"] = s.planner_reply;
    if (s.prompt) j["prompt"] = *s.prompt;
    steps.push_back(std::move(j));
  }
  nlohmann::ordered_json mem = nlohmann::ordered_json::array();
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& m : trace.memory) {
    nlohmann::ordered_json e;
    e["id"] = m.image_id;
    e["parent"] = m.parent_id ? nlohmann::ordered_json(*m.parent_id) : nlohmann::ordered_json();
    e["description"] = m.description;
    e["size"] = {m.width, m.height};
    e["hash"] = hex(m.hash);
    mem.push_back(std::move(e));
    if (m.parent_id) edges.push_back({*m.parent_id, m.image_id});
  }
  nlohmann::ordered_json j;
  j["steps"] = std::move(steps);
  j["final_answer"] = trace.final_answer ? nlohmann::ordered_json(*trace.final_answer)
                                         : nlohmann::ordered_json();
  j["budget_exhausted"] = trace.budget_exhausted;
  j["memory"] = std::move(mem);
  j["memory_edges"] = std::move(edges);
  return j;
}

nlohmann::ordered_json to_json(const RefineResult& result, const std::string& question) {
  nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
  for (const auto& r : result.rounds) {
    nlohmann::ordered_json j;
    j["round"] = r.round;
    j["tools"] = r.tools;
    if (r.dispatch) {
      j["dispatch"] = {{"selected", r.dispatch->selected},
                       {"fallback", r.dispatch->fallback},
                       {"raw_reply", r.dispatch->raw_reply}};
    }
    j["suggestions_in"] = r.suggestions_in;
    j["trace"] = to_json(r.trace);
    nlohmann::ordered_json c;
    c["adjustment"] = r.critique.adjustment;
    c["tools"] = r.critique.tools ? nlohmann::ordered_json(*r.critique.tools) : nlohmann::ordered_json();
    c["suggestions"] = r.critique.suggestions;
    c["unparseable"] = r.critique.unparseable;
    j["critique"] = std::move(c);
    rounds.push_back(std::move(j));
  }
  nlohmann::ordered_json j;
  j["question"] = question;
  j["rounds_used"] = result.rounds_used();
  j["final_answer"] = result.final_answer ? nlohmann::ordered_json(*result.final_answer)
                                          : nlohmann::ordered_json();
  j["rounds"] = std::move(rounds);
  return j;
}

}  // namespace structlens::workflow
