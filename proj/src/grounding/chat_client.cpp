#include <httplib.h>

#include "structlens/grounding/chat_client.h"

#include <cstdlib>
#include <optional>
#include <regex>

#include "structlens/core/errors.h"
#include "structlens/core/png_io.h"

namespace structlens::grounding {

namespace {

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse post(const std::string& url, const std::string& body,
                    const std::map<std::string, std::string>& headers,
                    int timeout_seconds) override {
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, url_re)) throw InvalidArgument("unsupported endpoint URL '" + url + "'");
    httplib::Client client(m[1].str());
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    client.set_write_timeout(timeout_seconds, 0);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    const std::string path = m[2].matched ? m[2].str() : "/";
    auto res = client.Post(path, h, body, "application/json");
    if (!res) return {0, httplib::to_string(res.error())};
    return {res->status, res->body};
  }
};

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport() { return std::make_shared<HttplibTransport>(); }

ChatPart ChatPart::from_image(const RasterImage& image) {
  return {Kind::image, "data:image/png;base64," + base64_encode(encode_png(image))};
}

nlohmann::ordered_json chat_request_body(const std::string& model,
                                         const std::vector<ChatMessage>& messages) {
  nlohmann::ordered_json body;
  body["model"] = model;
  auto msgs = nlohmann::ordered_json::array();
  for (const auto& m : messages) {
    nlohmann::ordered_json jm;
    jm["role"] = m.role;
    auto content = nlohmann::ordered_json::array();
    for (const auto& part : m.content) {
      if (part.kind == ChatPart::Kind::text) {
        content.push_back({{"type", "text"}, {"text", part.text}});
      } else {
        content.push_back({{"type", "image"}, {"image_url", {{"url", part.text}}}});
      }
    }
    jm["content"] = std::move(content);
    msgs.push_back(std::move(jm));
  }
  body["messages"] = std::move(msgs);
  return body;
}

std::string chat_reply_text(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    throw MalformedResponse("response body is not JSON", body);
  }
  auto text_of = [&](const nlohmann::json& content) -> std::optional<std::string> {
    if (content.is_string()) return content.get<std::string>();
    if (content.is_array()) {
      std::string joined;
      for (const auto& part : content) {
        if (part.is_object() && part.value("type", "") == "text" && part.contains("text")) {
          joined += part["text"].get<std::string>();
        }
      }
      return joined;
    }
    return std::nullopt;
  };
  if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
    const auto& choice = j["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content")) {
      if (auto t = text_of(choice["message"]["content"])) return *t;
    }
  }
  if (j.is_object() && j.contains("content")) {
    if (auto t = text_of(j["content"])) return *t;
  }
  throw MalformedResponse("response has no message content", body);
}

ChatClient::ChatClient(ChatEndpoint endpoint, std::shared_ptr<HttpTransport> transport)
    : endpoint_(std::move(endpoint)), transport_(std::move(transport)) {
  if (endpoint_.url.empty()) throw InvalidArgument("remote backend requires an endpoint URL");
  if (!transport_) transport_ = make_http_transport();
}

std::string ChatClient::complete(const std::vector<ChatMessage>& messages) const {
  const std::string body = chat_request_body(endpoint_.model, messages).dump();
  std::map<std::string, std::string> headers;
  if (!endpoint_.token_env.empty()) {
    if (const char* token = std::getenv(endpoint_.token_env.c_str()); token && *token) {
      headers["Authorization"] = std::string("Bearer ") + token;
    }
  }
  std::string last_error;
  for (int attempt = 0; attempt <= endpoint_.retries; ++attempt) {
    const auto res = transport_->post(endpoint_.url, body, headers, endpoint_.timeout_seconds);
    if (res.status >= 200 && res.status < 300) return chat_reply_text(res.body);
    last_error = res.status == 0 ? "connection failed: " + res.body
                                 : "HTTP " + std::to_string(res.status);
    const bool retryable = res.status == 0 || res.status == 429 || res.status >= 500;
    if (!retryable) break;
  }
  throw BackendUnavailable(endpoint_.url + ": " + last_error);
}

}  // namespace structlens::grounding
