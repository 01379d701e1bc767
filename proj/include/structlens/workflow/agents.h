#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "structlens/core/raster.h"
#include "structlens/grounding/chat_client.h"

namespace structlens::workflow {

enum class Capability { text_only, vision_text };

// Roles used by the engine and the benchmark judge.
namespace roles {
inline constexpr char kDispatcher[] = "dispatcher";
inline constexpr char kPlanner[] = "planner";
inline constexpr char kReasoner[] = "reasoner";
inline constexpr char kVisualCritic[] = "visual_critic";
inline constexpr char kPlanningCritic[] = "planning_critic";
inline constexpr char kJudge[] = "judge";
}  // namespace roles

struct AgentRequest {
  std::string role;
  std::string system;
  std::string user;
  std::vector<std::string> image_ids;  // parallel to images
  std::vector<RasterImage> images;
};

// A text (or vision+text) model speaking one role per call.
class AgentBackend {
 public:
  virtual ~AgentBackend() = default;
  virtual std::string id() const = 0;
  virtual Capability capability() const = 0;
  virtual std::string complete(const AgentRequest& request) = 0;
};

struct RecordedRequest {
  std::string role;
  std::string system;
  std::string user;
  std::vector<std::string> image_ids;
  std::vector<std::uint64_t> image_hashes;
};

// Replays canned replies per role, first in first out. Running out is an
// error (ScriptExhausted). Every request is recorded.
class ScriptedBackend : public AgentBackend {
 public:
  // {"planner": ["...", ...], "reasoner": [...], ...}
  explicit ScriptedBackend(const nlohmann::json& script);
  static std::unique_ptr<ScriptedBackend> from_file(const std::filesystem::path& path);

  std::string id() const override { return "scripted"; }
  Capability capability() const override { return Capability::vision_text; }
  std::string complete(const AgentRequest& request) override;

  std::vector<RecordedRequest> requests() const;
  std::vector<RecordedRequest> requests_for(const std::string& role) const;
  std::size_t remaining(const std::string& role) const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::deque<std::string>> replies_;
  std::vector<RecordedRequest> log_;
};

// Chat-completions model. Text-only models never receive image parts.
class RemoteAgentBackend : public AgentBackend {
 public:
  RemoteAgentBackend(grounding::ChatClient client, Capability capability);

  std::string id() const override { return "remote:" + client_.endpoint().model; }
  Capability capability() const override { return capability_; }
  std::string complete(const AgentRequest& request) override;

 private:
  grounding::ChatClient client_;
  Capability capability_;
};

// Backend per role; one backend may serve several roles.
struct Agents {
  AgentBackend* dispatcher = nullptr;
  AgentBackend* planner = nullptr;
  AgentBackend* reasoner = nullptr;
  AgentBackend* visual_critic = nullptr;
  AgentBackend* planning_critic = nullptr;

  static Agents all(AgentBackend& b) { return {&b, &b, &b, &b, &b}; }
};

}  // namespace structlens::workflow
