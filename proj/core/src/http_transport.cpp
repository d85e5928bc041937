#include "httplib.h"

#include "dmnprompt/llm.hpp"

namespace dmnprompt::llm {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse post(const HttpRequest& request) override {
    std::size_t scheme_end = request.url.find("://");
    if (scheme_end == std::string::npos) {
      throw LlmError(LlmErrorKind::unavailable, "endpoint URL '" + request.url + "' has no scheme");
    }
    std::size_t path_start = request.url.find('/', scheme_end + 3);
    std::string origin = request.url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : request.url.substr(path_start);

    httplib::Client client(origin);
    if (!client.is_valid()) throw LlmError(LlmErrorKind::unavailable, "unsupported endpoint '" + origin + "'");
    client.set_connection_timeout(request.timeout_seconds, 0);
    client.set_read_timeout(request.timeout_seconds, 0);
    client.set_write_timeout(request.timeout_seconds, 0);

    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : request.headers) {
      if (iequals(k, "Content-Type")) {
        content_type = v;
      } else {
        headers.emplace(k, v);
      }
    }
    auto result = client.Post(path, headers, request.body, content_type);
    if (!result) {
      auto err = result.error();
      if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
        throw LlmError(LlmErrorKind::timeout, origin + ": " + httplib::to_string(err));
      }
      throw LlmError(LlmErrorKind::unavailable, origin + ": " + httplib::to_string(err));
    }
    return HttpResponse{result->status, result->body};
  }
};

}  // namespace

std::shared_ptr<HttpTransport> make_default_transport() { return std::make_shared<HttplibTransport>(); }

}  // namespace dmnprompt::llm
