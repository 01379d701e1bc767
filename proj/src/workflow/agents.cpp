#include "structlens/workflow/agents.h"

#include "structlens/core/errors.h"
#include "structlens/core/png_io.h"

namespace structlens::workflow {

ScriptedBackend::ScriptedBackend(const nlohmann::json& script) {
  if (!script.is_object()) throw SchemaError("a script maps role names to reply lists");
  for (const auto& [role, list] : script.items()) {
    if (!list.is_array()) throw SchemaError("script entry for " + role + " must be a list");
    auto& q = replies_[role];
    for (const auto& r : list) {
      if (!r.is_string()) throw SchemaError("script replies for " + role + " must be strings");
      q.push_back(r.get<std::string>());
    }
  }
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("script " + path.string() + " is not valid JSON: " + e.what());
  }
  return std::make_unique<ScriptedBackend>(j);
}

std::string ScriptedBackend::complete(const AgentRequest& request) {
  std::lock_guard lock(mutex_);
  RecordedRequest rec{request.role, request.system, request.user, request.image_ids, {}};
  for (const auto& img : request.images) rec.image_hashes.push_back(content_hash(img));
  log_.push_back(std::move(rec));
  auto it = replies_.find(request.role);
  if (it == replies_.end() || it->second.empty()) {
    throw ScriptExhausted("no scripted reply left for role " + request.role);
  }
  std::string reply = std::move(it->second.front());
  it->second.pop_front();
  return reply;
}

std::vector<RecordedRequest> ScriptedBackend::requests() const {
  std::lock_guard lock(mutex_);
  return log_;
}

std::vector<RecordedRequest> ScriptedBackend::requests_for(const std::string& role) const {
  std::lock_guard lock(mutex_);
  std::vector<RecordedRequest> out;
  for (const auto& r : log_) {
    if (r.role == role) out.push_back(r);
  }
  return out;
}

std::size_t ScriptedBackend::remaining(const std::string& role) const {
  std::lock_guard lock(mutex_);
  auto it = replies_.find(role);
  return it == replies_.end() ? 0 : it->second.size();
}

RemoteAgentBackend::RemoteAgentBackend(grounding::ChatClient client, Capability capability)
    : client_(std::move(client)), capability_(capability) {}

std::string RemoteAgentBackend::complete(const AgentRequest& request) {
  std::vector<grounding::ChatMessage> messages;
  if (!request.system.empty()) {
    messages.push_back({"system", {grounding::ChatPart::from_text(request.system)}});
  }
  grounding::ChatMessage user{"user", {}};
  if (capability_ == Capability::vision_text) {
    for (const auto& img : request.images) user.content.push_back(grounding::ChatPart::from_image(img));
  }
  user.content.push_back(grounding::ChatPart::from_text(request.user));
  messages.push_back(std::move(user));
  return client_.complete(messages);
}

}  // namespace structlens::workflow
