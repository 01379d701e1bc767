#pragma once

#include <nlohmann/json.hpp>

#include "fixtures.h"
#include "structlens/workflow/engine.h"

namespace testsupport {

// Runs a scripted refinement loop with oracle grounding on `image`.
struct ScriptedRun {
  std::unique_ptr<workflow::ScriptedBackend> agents;
  std::unique_ptr<grounding::OracleBackend> oracle;
  workflow::ToolRegistry registry = workflow::default_registry();
  workflow::RefineResult result;
};

inline std::unique_ptr<ScriptedRun> run_script(const nlohmann::json& script, const RasterImage& image,
                                               std::vector<ElementAnnotation> annotations,
                                               const std::string& question, int max_rounds = 3) {
  auto run = std::make_unique<ScriptedRun>();
  run->agents = std::make_unique<workflow::ScriptedBackend>(script);
  run->oracle = oracle_for(std::move(annotations));
  workflow::Workflow wf{workflow::Agents::all(*run->agents), run->oracle.get(), &run->registry, {}, {}};
  wf.config.max_rounds = max_rounds;
  run->result = workflow::refine_loop(wf, question, image);
  return run;
}

// crop -> reasoner -> terminate, one round.
inline nlohmann::json crop_reason_script() {
  return {
      {"dispatcher", {"[Subfigure_Cropping]"}},
      {"planner",
       {"THOUGHT 1: Isolate the top-right subplot.\n"
        "ACTION 1: crop_subfigure(image=img_0, target_desc=\"the subplot at row 1, column 2\")",
        "THOUGHT 2: Read the peak from the crop.\n"
        "ACTION 2: reasoner(image=img_1, question=\"What is the highest value?\")",
        "THOUGHT 3: The reasoner answered.\nACTION 3: TERMINATE"}},
      {"visual_critic", {"true", "true"}},
      {"reasoner", {"42"}},
      {"planning_critic", {"ADJUSTMENT: False"}},
  };
}

// Works on img_1, then goes back to img_0 for a second crop.
inline nlohmann::json branch_recall_script() {
  return {
      {"dispatcher", {"[Subfigure_Cropping, Region_Magnification]"}},
      {"planner",
       {"THOUGHT 1: Look at the first subplot.\n"
        "ACTION 1: crop_subfigure(image=img_0, target_desc=\"the subplot at row 1, column 1\")",
        "THOUGHT 2: That panel is not the one asked about; return to the original image.\n"
        "ACTION 2: crop_subfigure(image=img_0, target_desc=\"the subplot at row 2, column 2\")",
        "THOUGHT 3: Compare.\nACTION 3: reasoner(image=img_2, question=\"Which series is higher?\")",
        "THOUGHT 4: Done.\nFINAL ANSWER: Series A\nACTION 4: TERMINATE"}},
      {"visual_critic", {"true", "true", "true"}},
      {"reasoner", {"Series A"}},
      {"planning_critic", {"ADJUSTMENT: False"}},
  };
}

// Critic verdicts True, True, False with one terminate per round.
inline nlohmann::json three_round_script() {
  return {
      {"dispatcher", {"[Subfigure_Cropping, Legend_Masking]"}},
      {"planner",
       {"THOUGHT 1: Guess.\nFINAL ANSWER: 10\nACTION 1: TERMINATE",
        "THOUGHT 1: Use the hint.\nFINAL ANSWER: 12\nACTION 1: TERMINATE",
        "THOUGHT 1: Use both hints.\nFINAL ANSWER: 14\nACTION 1: TERMINATE"}},
      {"planning_critic",
       {"ADJUSTMENT: True\ntools: [Region_Magnification]\nMagnify the y axis near the peak.",
        "ADJUSTMENT: True\nRead the tick labels again.",
        "ADJUSTMENT: False"}},
  };
}

}  // namespace testsupport
