#include "structlens/charttools/tool_output.h"

namespace structlens::tools {

nlohmann::ordered_json to_json(const grounding::GroundingCall& call) {
  nlohmann::ordered_json j;
  j["request"] = {{"image_ref", call.request.image_ref},
                  {"prompt", call.request.prompt},
                  {"expected_kind", std::string(grounding::to_string(call.request.expected_kind))}};
  j["result"] = grounding::to_json(call.result);
  return j;
}

nlohmann::ordered_json provenance_json(const ToolOutput& out) {
  nlohmann::ordered_json j;
  j["tool"] = out.provenance.tool;
  j["args"] = out.provenance.args;
  j["description"] = out.description;
  if (!out.note.empty()) j["note"] = out.note;
  j["output_size"] = {out.image.width(), out.image.height()};
  auto calls = nlohmann::ordered_json::array();
  for (const auto& c : out.provenance.grounding_calls) calls.push_back(to_json(c));
  j["grounding_calls"] = std::move(calls);
  auto added = nlohmann::ordered_json::array();
  for (const auto& a : out.added) added.push_back(structlens::to_json(a));
  j["added"] = std::move(added);
  return j;
}

}  // namespace structlens::tools
