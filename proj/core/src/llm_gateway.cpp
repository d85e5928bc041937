#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <ctime>
#include <semaphore>
#include <thread>

#include "dmnprompt/llm.hpp"
#include "dmnprompt/log.hpp"
#include "json.hpp"

namespace dmnprompt::llm {

using nlohmann::json;

std::string_view to_string(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::openai_compatible: return "openai_compatible";
    case BackendKind::gemini_style: return "gemini_style";
    case BackendKind::replay: return "replay";
  }
  return "?";
}

std::optional<BackendKind> backend_kind_from_string(std::string_view text) noexcept {
  if (text == "openai_compatible" || text == "openai") return BackendKind::openai_compatible;
  if (text == "gemini_style" || text == "gemini") return BackendKind::gemini_style;
  if (text == "replay") return BackendKind::replay;
  return std::nullopt;
}

std::string_view to_string(LlmErrorKind kind) noexcept {
  switch (kind) {
    case LlmErrorKind::auth_error: return "AuthError";
    case LlmErrorKind::rate_limited: return "RateLimited";
    case LlmErrorKind::timeout: return "Timeout";
    case LlmErrorKind::protocol_error: return "ProtocolError";
    case LlmErrorKind::replay_miss: return "ReplayMiss";
    case LlmErrorKind::unavailable: return "Unavailable";
  }
  return "?";
}

void BackendConfig::check() const {
  if (temperature < Decimal(0)) throw std::invalid_argument("temperature must be >= 0");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (timeout_seconds <= 0) throw std::invalid_argument("timeout_seconds must be > 0");
  if (max_output_tokens <= 0) throw std::invalid_argument("max_output_tokens must be > 0");
  if (max_in_flight <= 0) throw std::invalid_argument("max_in_flight must be > 0");
  if (kind == BackendKind::replay) {
    if (transcript_path.empty()) throw std::invalid_argument("the replay backend needs a transcript path");
    if (record) throw std::invalid_argument("the replay backend cannot record");
  } else if (record && transcript_path.empty()) {
    throw std::invalid_argument("recording needs a transcript path");
  }
}

std::string BackendConfig::effective_endpoint() const {
  if (!endpoint_url.empty()) {
    std::string url = endpoint_url;
    while (!url.empty() && url.back() == '/') url.pop_back();
    return url;
  }
  switch (kind) {
    case BackendKind::openai_compatible: return "https://api.openai.com/v1";
    case BackendKind::gemini_style: return "https://generativelanguage.googleapis.com/v1beta";
    case BackendKind::replay: return "";
  }
  return "";
}

std::string BackendConfig::effective_key_env_var() const {
  if (!api_key_env_var.empty()) return api_key_env_var;
  switch (kind) {
    case BackendKind::openai_compatible: return "OPENAI_API_KEY";
    case BackendKind::gemini_style: return "GEMINI_API_KEY";
    case BackendKind::replay: return "";
  }
  return "";
}

std::chrono::milliseconds backoff_delay(int retry, int timeout_seconds) {
  const std::int64_t cap = std::int64_t{timeout_seconds} * 1000;
  std::int64_t delay = 500;
  for (int i = 0; i < retry && delay < cap; ++i) delay *= 2;
  return std::chrono::milliseconds(std::min(delay, cap));
}

namespace {

std::string now_rfc3339() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Reply {
  std::string text;
  std::optional<std::int64_t> tokens_in;
  std::optional<std::int64_t> tokens_out;
};

std::optional<std::int64_t> count_at(const json& j, const char* object, const char* key) {
  auto o = j.find(object);
  if (o == j.end() || !o->is_object()) return std::nullopt;
  auto v = o->find(key);
  if (v == o->end() || !v->is_number_integer()) return std::nullopt;
  return v->get<std::int64_t>();
}

HttpRequest openai_request(const BackendConfig& c, const std::string& key, const std::string& prompt) {
  json body = {{"model", c.model_name},
               {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
               {"temperature", c.temperature.to_double()},
               {"max_tokens", c.max_output_tokens}};
  return HttpRequest{c.effective_endpoint() + "/chat/completions",
                     {{"Authorization", "Bearer " + key}, {"Content-Type", "application/json"}},
                     body.dump(-1, ' ', false, json::error_handler_t::replace),
                     c.timeout_seconds};
}

Reply openai_reply(const json& j) {
  const auto& content = j.at("choices").at(0).at("message").at("content");
  if (!content.is_string()) throw std::invalid_argument("message content is not a string");
  return Reply{content.get<std::string>(), count_at(j, "usage", "prompt_tokens"),
               count_at(j, "usage", "completion_tokens")};
}

HttpRequest gemini_request(const BackendConfig& c, const std::string& key, const std::string& prompt) {
  json body = {{"contents", json::array({{{"role", "user"}, {"parts", json::array({{{"text", prompt}}})}}})},
               {"generationConfig",
                {{"temperature", c.temperature.to_double()}, {"maxOutputTokens", c.max_output_tokens}}}};
  return HttpRequest{c.effective_endpoint() + "/models/" + c.model_name + ":generateContent",
                     {{"x-goog-api-key", key}, {"Content-Type", "application/json"}},
                     body.dump(-1, ' ', false, json::error_handler_t::replace),
                     c.timeout_seconds};
}

Reply gemini_reply(const json& j) {
  const auto& parts = j.at("candidates").at(0).at("content").at("parts");
  std::string text;
  for (const auto& p : parts) {
    auto t = p.find("text");
    if (t != p.end() && t->is_string()) text += t->get<std::string>();
  }
  if (parts.empty()) throw std::invalid_argument("candidate has no parts");
  return Reply{text, count_at(j, "usageMetadata", "promptTokenCount"),
               count_at(j, "usageMetadata", "candidatesTokenCount")};
}

std::string snippet(const std::string& body) {
  return body.size() <= 200 ? body : body.substr(0, 200) + "...";
}

}  // namespace

struct Gateway::Limiter {
  explicit Limiter(int n) : slots(n) {}
  std::counting_semaphore<> slots;
  std::atomic<std::size_t> live_calls{0};
};

Gateway::Gateway(BackendConfig config, Options options)
    : config_(std::move(config)), options_(std::move(options)) {
  config_.check();
  limiter_ = std::make_unique<Limiter>(config_.max_in_flight);
  if (!options_.sleeper) options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (!options_.env) {
    options_.env = [](const std::string& name) -> std::optional<std::string> {
      const char* v = std::getenv(name.c_str());
      if (v == nullptr) return std::nullopt;
      return std::string(v);
    };
  }
  if (!options_.transcript && !config_.transcript_path.empty()) {
    options_.transcript = TranscriptStore::open(config_.transcript_path);
  }
  if (config_.kind != BackendKind::replay && !options_.transport) options_.transport = make_default_transport();
}

Gateway::~Gateway() = default;

std::size_t Gateway::live_calls() const noexcept { return limiter_->live_calls.load(); }

std::string Gateway::complete(const std::string& prompt) {
  if (config_.kind == BackendKind::replay) {
    const std::string fp = fingerprint(prompt, config_.model_name, config_.temperature);
    auto hit = options_.transcript ? options_.transcript->find(fp) : std::nullopt;
    if (!hit) throw LlmError(LlmErrorKind::replay_miss, "no transcript record for fingerprint " + fp);
    return hit->response;
  }
  return complete_live(prompt);
}

std::string Gateway::complete_live(const std::string& prompt) {
  const std::string env_var = config_.effective_key_env_var();
  auto key = options_.env(env_var);
  if (!key || key->empty()) {
    throw LlmError(LlmErrorKind::auth_error, "environment variable " + env_var + " is not set");
  }
  const bool gemini = config_.kind == BackendKind::gemini_style;
  HttpRequest request = gemini ? gemini_request(config_, *key, prompt) : openai_request(config_, *key, prompt);

  HttpResponse response;
  for (int attempt = 0;; ++attempt) {
    std::optional<LlmError> transient;
    {
      limiter_->slots.acquire();
      try {
        limiter_->live_calls.fetch_add(1);
        response = options_.transport->post(request);
      } catch (const LlmError& e) {
        if (e.kind() != LlmErrorKind::timeout && e.kind() != LlmErrorKind::unavailable) {
          limiter_->slots.release();
          throw;
        }
        transient = e;
      } catch (...) {
        limiter_->slots.release();
        throw;
      }
      limiter_->slots.release();
    }

    if (!transient) {
      if (response.status == 401 || response.status == 403) {
        throw LlmError(LlmErrorKind::auth_error, "HTTP " + std::to_string(response.status) + ": " + snippet(response.body));
      }
      if (response.status == 429) {
        transient = LlmError(LlmErrorKind::rate_limited, "HTTP 429: " + snippet(response.body));
      } else if (response.status >= 500) {
        transient = LlmError(LlmErrorKind::unavailable,
                             "HTTP " + std::to_string(response.status) + ": " + snippet(response.body));
      } else if (response.status < 200 || response.status >= 300) {
        throw LlmError(LlmErrorKind::protocol_error,
                       "HTTP " + std::to_string(response.status) + ": " + snippet(response.body));
      }
    }
    if (!transient) break;
    if (attempt >= config_.max_retries) throw *transient;
    auto delay = backoff_delay(attempt, config_.timeout_seconds);
    log::info(std::string(transient->what()) + "; retrying in " + std::to_string(delay.count()) + " ms");
    options_.sleeper(delay);
  }

  Reply reply;
  try {
    json j = json::parse(response.body);
    reply = gemini ? gemini_reply(j) : openai_reply(j);
  } catch (const json::exception& e) {
    throw LlmError(LlmErrorKind::protocol_error, std::string("unexpected response: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw LlmError(LlmErrorKind::protocol_error, std::string("unexpected response: ") + e.what());
  }

  if (config_.record && options_.transcript) {
    TranscriptRecord rec;
    rec.fingerprint = fingerprint(prompt, config_.model_name, config_.temperature);
    rec.backend = config_.kind;
    rec.model = config_.model_name;
    rec.prompt = prompt;
    rec.response = reply.text;
    rec.created_at = now_rfc3339();
    rec.tokens_in = reply.tokens_in;
    rec.tokens_out = reply.tokens_out;
    options_.transcript->record(rec);
  }
  return reply.text;
}

std::string complete(const std::string& prompt, const BackendConfig& config) {
  Gateway gateway(config);
  return gateway.complete(prompt);
}

}  // namespace dmnprompt::llm
