#include "structlens/grounding/remote.h"

#include "structlens/core/errors.h"
#include "structlens/grounding/response_parser.h"

namespace structlens::grounding {

RemoteGroundingBackend::RemoteGroundingBackend(ChatClient client, prompts::PromptSet prompts)
    : client_(std::move(client)), prompts_(std::move(prompts)) {}

std::vector<ChatMessage> RemoteGroundingBackend::build_messages(const GroundingRequest& request,
                                                                const RasterImage& image) const {
  const std::string user =
      prompts::render(prompts_.get("grounding_user"), {{"element", request.prompt}});
  return {
      ChatMessage{"system", {ChatPart::from_text(prompts_.get("grounding_system"))}},
      ChatMessage{"user", {ChatPart::from_image(image), ChatPart::from_text(user)}},
  };
}

GroundingResult RemoteGroundingBackend::ground(const GroundingRequest& request,
                                               const RasterImage& image) {
  if (request.prompt.empty()) throw InvalidArgument("grounding prompt must be non-empty");
  const std::string reply = client_.complete(build_messages(request, image));
  return {parse_grounding_text(reply, request.expected_kind, image.width(), image.height()), id(),
          reply};
}

}  // namespace structlens::grounding
