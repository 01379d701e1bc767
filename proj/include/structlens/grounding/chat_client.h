#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "structlens/core/raster.h"

namespace structlens::grounding {

struct HttpResponse {
  int status = 0;
  std::string body;
};

// POST transport. Returns nullopt-like status 0 on connection failure.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const std::string& url, const std::string& body,
                            const std::map<std::string, std::string>& headers,
                            int timeout_seconds) = 0;
};

// cpp-httplib backed transport; handles http:// and https:// URLs.
std::shared_ptr<HttpTransport> make_http_transport();

struct ChatEndpoint {
  std::string url;                        // full URL of the chat endpoint
  std::string model;
  std::string token_env = "STRUCTLENS_API_TOKEN";  // bearer token variable
  int timeout_seconds = 60;
  int retries = 2;                        // extra attempts after the first
};

struct ChatPart {
  enum class Kind { text, image } kind = Kind::text;
  std::string text;  // text, or a data URL for images

  static ChatPart from_text(std::string t) { return {Kind::text, std::move(t)}; }
  static ChatPart from_image(const RasterImage& image);
};

struct ChatMessage {
  std::string role;
  std::vector<ChatPart> content;
};

// Request body: {model, messages:[{role, content:[{type:"text", text} |
// {type:"image", image_url:{url:"data:image/png;base64,..."}}]}]}.
nlohmann::ordered_json chat_request_body(const std::string& model,
                                         const std::vector<ChatMessage>& messages);

// Pulls the reply text out of a response body. Understands the
// choices[0].message.content shape and a bare {"content": "..."} object.
// Throws MalformedResponse.
std::string chat_reply_text(const std::string& body);

class ChatClient {
 public:
  ChatClient(ChatEndpoint endpoint, std::shared_ptr<HttpTransport> transport);

  // Retries transport failures, 429 and 5xx. Throws BackendUnavailable when
  // attempts run out and MalformedResponse for unreadable bodies.
  std::string complete(const std::vector<ChatMessage>& messages) const;

  const ChatEndpoint& endpoint() const { return endpoint_; }

 private:
  ChatEndpoint endpoint_;
  std::shared_ptr<HttpTransport> transport_;
};

}  // namespace structlens::grounding
