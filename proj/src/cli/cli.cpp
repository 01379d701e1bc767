#include "structlens/cli/cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include "structlens/bench/bench.h"
#include "structlens/chartgen/corpus.h"
#include "structlens/cli/config.h"
#include "structlens/core/errors.h"
#include "structlens/core/png_io.h"
#include "structlens/geomtools/diagram.h"
#include "structlens/grounding/evaluator.h"
#include "structlens/grounding/oracle.h"
#include "structlens/grounding/remote.h"
#include "structlens/workflow/engine.h"

namespace structlens::cli {

namespace {

namespace fs = std::filesystem;

// Raised for flag combinations CLI11 cannot check on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

grounding::ChatEndpoint chat_endpoint(const EndpointConfig& e) {
  return {e.url, e.model, e.token_env, e.timeout_seconds, e.retries};
}

struct CommonFlags {
  std::string config_path;
  std::string grounding_mode;
  std::string grounding_endpoint;
  std::string grounding_model;
  std::string agent_endpoint;
  std::string agent_model;
  std::string prompt_dir;
};

Config effective_config(const CommonFlags& f) {
  Config c = f.config_path.empty() ? Config{} : load_config(f.config_path);
  if (!f.grounding_mode.empty()) c.grounding_mode = f.grounding_mode;
  if (!f.grounding_endpoint.empty()) c.grounding.url = f.grounding_endpoint;
  if (!f.grounding_model.empty()) c.grounding.model = f.grounding_model;
  if (!f.agent_endpoint.empty()) c.agents.url = f.agent_endpoint;
  if (!f.agent_model.empty()) c.agents.model = f.agent_model;
  if (!f.prompt_dir.empty()) c.prompt_dir = f.prompt_dir;
  return c;
}

prompts::PromptSet prompt_set(const Config& c) {
  return c.prompt_dir ? prompts::PromptSet(*c.prompt_dir) : prompts::PromptSet();
}

// Grounding for a single query image known in memory as img_0.
std::unique_ptr<grounding::GroundingBackend> make_grounding(const Config& c,
                                                            const std::optional<fs::path>& annotations) {
  if (c.grounding_mode == "remote") {
    if (c.grounding.url.empty()) throw UsageError("remote grounding needs an endpoint");
    return std::make_unique<grounding::RemoteGroundingBackend>(
        grounding::ChatClient(chat_endpoint(c.grounding), nullptr), prompt_set(c));
  }
  if (!annotations) throw UsageError("oracle grounding needs --annotations");
  auto oracle = std::make_unique<grounding::OracleBackend>();
  if (annotations) oracle->add_image(workflow::kRootImageId, read_annotations(*annotations));
  return oracle;
}

std::unique_ptr<workflow::AgentBackend> make_agents(const Config& c, const std::string& script) {
  if (!script.empty()) return workflow::ScriptedBackend::from_file(script);
  if (c.agents.url.empty()) throw UsageError("give --script or an agent endpoint");
  return std::make_unique<workflow::RemoteAgentBackend>(
      grounding::ChatClient(chat_endpoint(c.agents), nullptr),
      c.agents_vision ? workflow::Capability::vision_text : workflow::Capability::text_only);
}

workflow::WorkflowConfig workflow_config(const Config& c) {
  workflow::WorkflowConfig w;
  w.max_steps = c.max_steps;
  w.max_rounds = c.max_rounds;
  w.tools.tau = c.tau;
  w.tools.magnify_scale = c.magnify_scale;
  return w;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << j.dump(2) << "\n";
  } else {
    write_text(path, j.dump(2) + "\n");
  }
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

workflow::ArgValue arg_value(const std::string& v) {
  if (workflow::looks_like_image_id(v)) return workflow::ArgValue::image(v);
  if (auto n = workflow::ArgValue::bare(v).as_number()) return workflow::ArgValue::of_number(*n);
  return workflow::ArgValue::quoted(v);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured-image reasoning toolkit: corpus synthesis, grounding evaluation, "
               "visual tools, agent episodes and benchmarks.",
               "structlens"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  CommonFlags common;
  auto add_common = [&](CLI::App* sub, bool with_agents) {
    sub->add_option("--config", common.config_path, "Config file (key = value sections)");
    sub->add_option("--grounding", common.grounding_mode, "Grounding mode")
        ->check(CLI::IsMember({"oracle", "remote"}));
    sub->add_option("--grounding-endpoint", common.grounding_endpoint, "Grounding model URL");
    sub->add_option("--grounding-model", common.grounding_model, "Grounding model name");
    sub->add_option("--prompts", common.prompt_dir, "Directory of prompt template overrides");
    if (with_agents) {
      sub->add_option("--agent-endpoint", common.agent_endpoint, "Agent model URL");
      sub->add_option("--agent-model", common.agent_model, "Agent model name");
    }
  };

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic chart corpus with annotations");
  std::size_t synth_n = 0;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  unsigned synth_threads = 0;
  synth->add_option("--n", synth_n, "Number of single-panel charts")->required();
  auto* synth_seed_opt = synth->add_option("--seed", synth_seed, "Corpus seed");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--threads", synth_threads, "Worker threads (0 = all cores)");
  std::string synth_config;
  synth->add_option("--config", synth_config, "Config file");

  // ground-eval
  auto* geval = app.add_subcommand("ground-eval", "Score a grounding backend on a corpus");
  std::string geval_manifest;
  std::size_t geval_limit = 0;
  unsigned geval_in_flight = 4;
  double geval_perturb = 0.0;
  std::string geval_out;
  geval->add_option("--manifest", geval_manifest, "Corpus manifest.json or its directory")->required();
  geval->add_option("--mode", common.grounding_mode, "Grounding mode")
      ->check(CLI::IsMember({"oracle", "remote"}));
  geval->add_option("--limit", geval_limit, "Evaluate only the first N images");
  geval->add_option("--max-in-flight", geval_in_flight, "Concurrent images");
  geval->add_option("--perturb", geval_perturb, "Shift every prediction by (+d, +d) px");
  geval->add_option("--out", geval_out, "Write the JSON report here instead of stdout");
  geval->add_option("--config", common.config_path, "Config file");
  geval->add_option("--grounding-endpoint", common.grounding_endpoint, "Grounding model URL");
  geval->add_option("--grounding-model", common.grounding_model, "Grounding model name");
  geval->add_option("--prompts", common.prompt_dir, "Directory of prompt template overrides");

  // tool
  auto* tool = app.add_subcommand("tool", "Run one tool on an image");
  std::string tool_name;
  std::string tool_image;
  std::string tool_annotations;
  std::string tool_out;
  std::string tool_provenance;
  std::vector<std::string> tool_args;
  tool->add_option("name", tool_name, "Tool function or display name")->required();
  tool->add_option("--image", tool_image, "Input PNG");
  tool->add_option("--annotations", tool_annotations, "Annotations JSONL for oracle grounding");
  tool->add_option("--arg", tool_args, "Tool argument key=value (repeatable)");
  tool->add_option("--out", tool_out, "Output PNG");
  tool->add_option("--provenance", tool_provenance, "Provenance JSON path (default stdout)");
  add_common(tool, false);

  // solve
  auto* solve = app.add_subcommand("solve", "Answer one question with the agent workflow");
  std::string solve_image;
  std::string solve_question;
  std::string solve_annotations;
  std::string solve_script;
  std::string solve_out;
  int solve_max_rounds = 0;
  int solve_max_steps = 0;
  bool solve_prompts = false;
  solve->add_option("--image", solve_image, "Query image PNG")->required();
  solve->add_option("--question", solve_question, "Question text")->required();
  solve->add_option("--annotations", solve_annotations, "Annotations JSONL for oracle grounding");
  solve->add_option("--script", solve_script, "Scripted agent replies (JSON role -> list)");
  solve->add_option("--out", solve_out, "Trace JSON path (default stdout)");
  solve->add_option("--max-rounds", solve_max_rounds, "Refinement rounds");
  solve->add_option("--max-steps", solve_max_steps, "Planner steps per round");
  solve->add_flag("--record-prompts", solve_prompts, "Keep rendered planner prompts in the trace");
  add_common(solve, true);

  // bench
  auto* benchc = app.add_subcommand("bench", "Run a question set and report accuracy");
  std::string bench_items;
  std::string bench_script;
  std::string bench_judge = "offline";
  std::string bench_out;
  double bench_floor = 0.0;
  unsigned bench_concurrency = 1;
  int bench_max_rounds = 0;
  benchc->add_option("--items", bench_items, "Items JSONL")->required();
  benchc->add_option("--script", bench_script, "Shared scripted replies for items without one");
  benchc->add_option("--judge", bench_judge, "Judge mode")->check(CLI::IsMember({"offline", "remote"}));
  benchc->add_option("--out", bench_out, "Report JSON path");
  benchc->add_option("--floor", bench_floor, "Fail (exit 1) when accuracy is below this");
  benchc->add_option("--concurrency", bench_concurrency, "Items run in parallel");
  benchc->add_option("--max-rounds", bench_max_rounds, "Refinement rounds");
  add_common(benchc, true);

  // import-intergps
  auto* import = app.add_subcommand("import-intergps", "Convert Inter-GPS point positions to JSONL");
  std::string import_in;
  std::string import_out;
  std::string import_image;
  import->add_option("--input", import_in, "Inter-GPS logic-form JSON")->required();
  import->add_option("--out", import_out, "Annotations JSONL")->required();
  import->add_option("--image", import_image, "Diagram PNG used to bounds-check the points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nRun 'structlens --help' for usage.\n";
    return kExitUsage;
  }

  try {
    if (synth->parsed()) {
      Config c = synth_config.empty() ? Config{} : load_config(synth_config);
      const std::uint64_t seed = synth_seed_opt->count() ? synth_seed : c.seed;
      const auto manifest = chartgen::export_corpus(synth_n, seed, synth_out, synth_threads);
      out << manifest.string() << "\n";
      return kExitOk;
    }

    if (geval->parsed()) {
      const Config c = effective_config(common);
      fs::path mpath = geval_manifest;
      if (fs::is_directory(mpath)) mpath /= chartgen::kManifestName;
      const auto manifest = chartgen::read_manifest(mpath);
      std::unique_ptr<grounding::GroundingBackend> backend;
      if (c.grounding_mode == "remote") {
        backend = make_grounding(c, std::nullopt);
      } else {
        backend = std::make_unique<grounding::OracleBackend>(manifest);
      }
      std::unique_ptr<grounding::PerturbedBackend> perturbed;
      grounding::GroundingBackend* used = backend.get();
      if (geval_perturb != 0.0) {
        perturbed = std::make_unique<grounding::PerturbedBackend>(*backend, geval_perturb);
        used = perturbed.get();
      }
      const auto report = grounding::evaluate_grounding(*used, manifest, {geval_limit, geval_in_flight});
      write_json(geval_out, grounding::to_json(report), out);
      if (!geval_out.empty()) {
        out << "overall: " << fixed3(report.overall) << "\n";
        for (const auto& [cat, s] : report.per_category) {
          out << to_string(cat) << ": " << fixed3(s) << " (n=" << report.n_per_category.at(cat) << ")\n";
        }
      }
      return kExitOk;
    }

    if (tool->parsed()) {
      const Config c = effective_config(common);
      const auto registry = workflow::default_registry();
      const workflow::ToolSpec* spec = registry.find(tool_name);
      if (!spec) throw UsageError("unknown tool " + tool_name);
      workflow::ToolCall call{spec->function, {}};
      workflow::ImageMemory memory;
      const bool needs_image = spec->function != "compute";
      if (needs_image) {
        if (tool_image.empty()) throw UsageError("--image is required for " + spec->function);
        memory.put(read_png(tool_image), "input image");
        call.args.emplace_back("image", workflow::ArgValue::image(workflow::kRootImageId));
      }
      for (const auto& kv : tool_args) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--arg expects key=value, got " + kv);
        call.args.emplace_back(kv.substr(0, eq), arg_value(kv.substr(eq + 1)));
      }
      std::unique_ptr<grounding::GroundingBackend> grounding;
      if (needs_image) {
        grounding = make_grounding(
            c, tool_annotations.empty() ? std::nullopt : std::optional<fs::path>(tool_annotations));
      } else {
        grounding = std::make_unique<grounding::OracleBackend>();
      }
      const workflow::WorkflowConfig wc = workflow_config(c);
      const workflow::ToolEnv env{memory, *grounding, wc.tools};
      const auto result = spec->handler(call, env);
      if (!result.output) {
        out << result.text << "\n";
        return kExitOk;
      }
      if (tool_out.empty()) throw UsageError("--out is required for image tools");
      write_png(tool_out, result.output->image);
      write_json(tool_provenance, tools::provenance_json(*result.output), out);
      return kExitOk;
    }

    if (solve->parsed()) {
      Config c = effective_config(common);
      if (solve_max_rounds > 0) c.max_rounds = solve_max_rounds;
      if (solve_max_steps > 0) c.max_steps = solve_max_steps;
      auto agents = make_agents(c, solve_script);
      auto grounding = make_grounding(
          c, solve_annotations.empty() ? std::nullopt : std::optional<fs::path>(solve_annotations));
      const auto registry = workflow::default_registry();
      workflow::Workflow wf{workflow::Agents::all(*agents), grounding.get(), &registry,
                            workflow_config(c), prompt_set(c)};
      wf.config.record_prompts = solve_prompts;
      const auto result = workflow::refine_loop(wf, solve_question, read_png(solve_image));
      write_json(solve_out, workflow::to_json(result, solve_question), out);
      if (!solve_out.empty()) {
        out << "final answer: " << result.final_answer.value_or("(none)") << "\n"
            << "rounds: " << result.rounds_used() << "\n";
      }
      return kExitOk;
    }

    if (benchc->parsed()) {
      Config c = effective_config(common);
      if (bench_max_rounds > 0) c.max_rounds = bench_max_rounds;
      const auto items = bench::read_items(bench_items);
      const auto registry = workflow::default_registry();
      std::unique_ptr<workflow::AgentBackend> judge;
      if (bench_judge == "remote") {
        const EndpointConfig& je = c.judge.url.empty() ? c.agents : c.judge;
        if (je.url.empty()) throw UsageError("remote judging needs a judge or agent endpoint");
        judge = std::make_unique<workflow::RemoteAgentBackend>(
            grounding::ChatClient(chat_endpoint(je), nullptr), workflow::Capability::text_only);
      }
      if (bench_script.empty() && c.agents.url.empty()) {
        for (const auto& item : items) {
          if (!item.script) throw UsageError("item " + item.id + " has no script; give --script or an agent endpoint");
        }
      }
      bench::SystemFactory factory = [&](const bench::BenchItem& item) {
        bench::ItemSystem sys;
        const std::string script = item.script ? item.script->string() : bench_script;
        sys.agents = make_agents(c, script);
        sys.grounding = make_grounding(c, item.annotations);
        sys.judge = judge.get();
        return sys;
      };
      bench::BenchConfig bc;
      bc.workflow = workflow_config(c);
      bc.judge = bench_judge == "remote" ? bench::JudgeMode::remote : bench::JudgeMode::offline;
      bc.concurrency = bench_concurrency;
      bc.prompts = prompt_set(c);
      const auto report = bench::run_benchmark(items, registry, factory, bc);
      if (!bench_out.empty()) write_text(bench_out, bench::to_json(report).dump(2) + "\n");
      out << bench::summarize_text(report);
      if (report.accuracy < bench_floor) {
        err << "accuracy " << fixed3(report.accuracy) << " is below the floor " << fixed3(bench_floor) << "\n";
        return kExitFailure;
      }
      return kExitOk;
    }

    if (import->parsed()) {
      const auto record = nlohmann::json::parse(read_text(import_in));
      std::optional<std::pair<int, int>> bounds;
      if (!import_image.empty()) {
        const auto img = read_png(import_image);
        bounds = std::pair{img.width(), img.height()};
      }
      const auto points = geom::import_intergps(record, bounds);
      write_annotations(import_out, geom::diagram_annotations(points));
      out << points.size() << " points written to " << import_out << "\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nRun 'structlens --help' for usage.\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << e.kind() << "): " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace structlens::cli
