#include "structlens/bench/bench.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "structlens/core/errors.h"
#include "structlens/core/png_io.h"

namespace structlens::bench {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

void erase_all(std::string& s, std::string_view what) {
  for (std::size_t p = s.find(what); p != std::string::npos; p = s.find(what, p)) {
    s.erase(p, what.size());
  }
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t b = s[0] == '+' ? 1 : 0;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data() + b, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::vector<BenchItem> read_items(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  std::vector<BenchItem> items;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      BenchItem item;
      item.id = j.at("id").get<std::string>();
      item.image = resolve(j.at("image").get<std::string>());
      item.question = j.at("question").get<std::string>();
      const auto& answer = j.at("answer");
      item.gold_answer = answer.is_number() ? format_number(answer.get<double>())
                                            : answer.get<std::string>();
      if (j.contains("annotations")) item.annotations = resolve(j["annotations"].get<std::string>());
      if (j.contains("script")) item.script = resolve(j["script"].get<std::string>());
      if (item.id.empty()) throw SchemaError("empty id");
      if (trim(item.gold_answer).empty()) throw SchemaError("empty gold answer");
      items.push_back(std::move(item));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return items;
}

namespace {

std::string normalize_once(std::string_view raw) {
  std::string s = trim(raw);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  while (!s.empty() && (s.back() == '.' || s.back() == '"' || s.back() == '\'')) s.pop_back();
  while (!s.empty() && (s.front() == '"' || s.front() == '\'')) s.erase(s.begin());
  for (const char* sym : {"$", "€", "£", "¥", "%", "°"}) erase_all(s, sym);
  // Thousands separators: commas between digits.
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == ',' && std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
        std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
      s.erase(i, 1);
    }
  }
  s = trim(s);
  static const char* kUnits[] = {"percent", "usd", "dollars", "dollar", "euros", "euro",
                                 "degrees", "degree", "units", "unit", "years", "year",
                                 "kg", "km", "cm", "mm", "m", "g", "s", "ms", "h",
                                 "hours", "minutes", "seconds", "people", "points", "pts"};
  const std::size_t space = s.rfind(' ');
  if (space != std::string::npos && parse_number(trim(s.substr(0, space)))) {
    const std::string tail = s.substr(space + 1);
    for (const char* u : kUnits) {
      if (tail == u) {
        s = trim(s.substr(0, space));
        break;
      }
    }
  }
  return s;
}

}  // namespace

// Repeats the pass until nothing changes; stripping one layer can expose
// another (a quote after a removed period, a unit after a removed sign).
std::string normalize_answer(std::string_view raw) {
  std::string s = normalize_once(raw);
  for (std::string next = normalize_once(s); next != s; next = normalize_once(s)) s = std::move(next);
  return s;
}

JudgeVerdict judge_answer(const std::string& pred, const std::string& gold, JudgeMode mode,
                          workflow::AgentBackend* judge, const std::string& question,
                          const prompts::PromptSet& prompts) {
  if (mode == JudgeMode::remote) {
    if (!judge) throw InvalidArgument("remote judging needs a judge backend");
    workflow::AgentRequest req{workflow::roles::kJudge, {},
                               prompts::render(prompts.get("judge"), {{"question", question},
                                                                      {"gold", gold},
                                                                      {"prediction", pred}}),
                               {}, {}};
    const auto verdict = workflow::parse_verdict(judge->complete(req));
    if (!verdict) return {false, true};
    return {*verdict, false};
  }
  const std::string p = normalize_answer(pred);
  const std::string g = normalize_answer(gold);
  if (p == g) return {!g.empty(), false};
  const auto pn = parse_number(p);
  const auto gn = parse_number(g);
  return {pn && gn && *pn == *gn, false};
}

ItemResult score_item(const BenchItem& item, const workflow::RefineResult& run, JudgeMode mode,
                      workflow::AgentBackend* judge, const prompts::PromptSet& prompts) {
  ItemResult r;
  r.id = item.id;
  r.rounds_used = run.rounds_used();
  for (const auto& round : run.rounds) {
    r.identified.push_back(round.critique.adjustment);
    const auto& answer = round.trace.final_answer;
    if (!answer) {
      r.round_correct.push_back(false);
      continue;
    }
    const auto v = judge_answer(*answer, item.gold_answer, mode, judge, item.question, prompts);
    r.judge_flagged = r.judge_flagged || v.flagged;
    r.round_correct.push_back(v.correct);
  }
  r.predicted = run.final_answer.value_or("");
  r.correct = !r.round_correct.empty() && r.round_correct.back();
  return r;
}

BenchReport assemble_report(std::vector<ItemResult> items) {
  std::sort(items.begin(), items.end(),
            [](const ItemResult& a, const ItemResult& b) { return a.id < b.id; });
  BenchReport report;
  std::size_t rounds = 0;
  std::size_t correct = 0;
  for (const auto& it : items) {
    rounds = std::max(rounds, it.identified.size());
    correct += it.correct ? 1 : 0;
    report.flagged += it.judge_flagged ? 1 : 0;
    report.errors += it.error ? 1 : 0;
  }
  report.accuracy = items.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(items.size());
  for (std::size_t r = 0; r < rounds; ++r) {
    CriticRound row{static_cast<int>(r + 1), 0, 0, 0};
    for (const auto& it : items) {
      if (r >= it.identified.size() || !it.identified[r]) continue;
      ++row.identified;
      if (it.round_correct[r]) {
        ++row.fp;
      } else {
        ++row.tp;
      }
    }
    report.critic_rounds.push_back(row);
  }
  report.per_item = std::move(items);
  return report;
}

BenchReport run_benchmark(const std::vector<BenchItem>& items, const workflow::ToolRegistry& registry,
                          const SystemFactory& factory, const BenchConfig& config) {
  if (items.empty()) throw InvalidArgument("benchmark needs at least one item");
  std::vector<ItemResult> results(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      const BenchItem& item = items[i];
      try {
        ItemSystem sys = factory(item);
        const RasterImage image = read_png(item.image);
        workflow::Workflow wf{workflow::Agents::all(*sys.agents), sys.grounding.get(), &registry,
                              config.workflow, config.prompts};
        const auto run = workflow::refine_loop(wf, item.question, image);
        results[i] = score_item(item, run, config.judge, sys.judge, config.prompts);
      } catch (const std::exception& e) {
        results[i] = ItemResult{};
        results[i].id = item.id;
        results[i].error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(config.concurrency,
                                                     static_cast<unsigned>(items.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return assemble_report(std::move(results));
}

std::string summarize_text(const BenchReport& report) {
  std::size_t correct = 0;
  for (const auto& it : report.per_item) correct += it.correct ? 1 : 0;
  std::string out = "accuracy: " + fixed3(report.accuracy) + " (" + std::to_string(correct) + "/" +
                    std::to_string(report.per_item.size()) + ")\n";
  out += "flagged: " + std::to_string(report.flagged) + "  errors: " + std::to_string(report.errors) +
         "\n\n";
  char buf[128];
  out += "round  identified  tp  fp\n";
  for (const auto& r : report.critic_rounds) {
    std::snprintf(buf, sizeof buf, "%5d  %10d  %2d  %2d\n", r.round, r.identified, r.tp, r.fp);
    out += buf;
  }
  std::size_t id_width = 2;
  for (const auto& it : report.per_item) id_width = std::max(id_width, it.id.size());
  out += "\n" + std::string("id") + std::string(id_width - 2, ' ') + "  correct  rounds  predicted\n";
  for (const auto& it : report.per_item) {
    out += it.id + std::string(id_width - it.id.size(), ' ');
    std::snprintf(buf, sizeof buf, "  %-7s  %6d  ", it.correct ? "yes" : "no", it.rounds_used);
    out += buf;
    out += it.error ? "error: " + *it.error : it.predicted;
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json to_json(const BenchReport& report) {
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  std::size_t correct = 0;
  for (const auto& it : report.per_item) {
    correct += it.correct ? 1 : 0;
    nlohmann::ordered_json j;
    j["id"] = it.id;
    j["predicted"] = it.predicted;
    j["correct"] = it.correct;
    j["rounds_used"] = it.rounds_used;
    j["judge_flagged"] = it.judge_flagged;
    if (it.error) j["error"] = *it.error;
    j["identified"] = it.identified;
    j["round_correct"] = it.round_correct;
    items.push_back(std::move(j));
  }
  nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
  for (const auto& r : report.critic_rounds) {
    rounds.push_back({{"round", r.round}, {"identified", r.identified}, {"tp", r.tp}, {"fp", r.fp}});
  }
  nlohmann::ordered_json j;
  j["accuracy"] = report.accuracy;
  j["n_items"] = report.per_item.size();
  j["n_correct"] = correct;
  j["flagged"] = report.flagged;
  j["errors"] = report.errors;
  j["critic_rounds"] = std::move(rounds);
  j["per_item"] = std::move(items);
  return j;
}

}  // namespace structlens::bench
