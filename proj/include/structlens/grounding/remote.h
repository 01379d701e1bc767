#pragma once

#include <memory>

#include "structlens/core/prompts.h"
#include "structlens/grounding/backend.h"
#include "structlens/grounding/chat_client.h"

namespace structlens::grounding {

// Vision-model grounder reached over a chat-completions style endpoint.
class RemoteGroundingBackend : public GroundingBackend {
 public:
  RemoteGroundingBackend(ChatClient client, prompts::PromptSet prompts = {});

  std::string id() const override { return "remote:" + client_.endpoint().model; }
  GroundingResult ground(const GroundingRequest& request, const RasterImage& image) override;

  std::vector<ChatMessage> build_messages(const GroundingRequest& request,
                                          const RasterImage& image) const;

 private:
  ChatClient client_;
  prompts::PromptSet prompts_;
};

}  // namespace structlens::grounding
