#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dmnprompt/decimal.hpp"
#include "dmnprompt/io.hpp"

namespace dmnprompt::llm {

enum class BackendKind { openai_compatible, gemini_style, replay };

std::string_view to_string(BackendKind kind) noexcept;
std::optional<BackendKind> backend_kind_from_string(std::string_view text) noexcept;

struct BackendConfig {
  BackendKind kind = BackendKind::openai_compatible;
  std::string endpoint_url;       // empty: provider default
  std::string model_name;
  std::string api_key_env_var;    // empty: provider default
  Decimal temperature{0};
  int max_output_tokens = 1024;
  int timeout_seconds = 60;
  int max_retries = 3;
  int max_in_flight = 4;
  std::string transcript_path;    // replay source, or record target for live kinds
  bool record = false;

  /// Throws std::invalid_argument when an invariant does not hold.
  void check() const;

  [[nodiscard]] std::string effective_endpoint() const;
  [[nodiscard]] std::string effective_key_env_var() const;
};

enum class LlmErrorKind { auth_error, rate_limited, timeout, protocol_error, replay_miss, unavailable };

std::string_view to_string(LlmErrorKind kind) noexcept;

class LlmError : public std::runtime_error {
 public:
  LlmError(LlmErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}
  [[nodiscard]] LlmErrorKind kind() const noexcept { return kind_; }

 private:
  LlmErrorKind kind_;
};

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Hash of (prompt, model, temperature). The temperature enters in canonical
/// decimal form, so 0, 0.0 and 0.00 give the same fingerprint.
std::string fingerprint(std::string_view prompt, std::string_view model_name, const Decimal& temperature);

struct TranscriptRecord {
  std::string fingerprint;
  BackendKind backend = BackendKind::replay;
  std::string model;
  std::string prompt;
  std::string response;
  std::string created_at;  // RFC 3339, UTC
  std::optional<std::int64_t> tokens_in;
  std::optional<std::int64_t> tokens_out;
  friend bool operator==(const TranscriptRecord&, const TranscriptRecord&) = default;
};

std::string to_jsonl_line(const TranscriptRecord& record);  // no trailing newline

class TranscriptFormatError : public IoError {
 public:
  TranscriptFormatError(const std::string& path, std::size_t line, const std::string& detail)
      : IoError(path + ":" + std::to_string(line) + ": " + detail), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// JSONL transcript. The file is only ever appended to; when a fingerprint
/// occurs more than once the last line wins.
class TranscriptStore {
 public:
  TranscriptStore() = default;  // in memory only
  explicit TranscriptStore(std::string path) : path_(std::move(path)) {}

  /// Reads every record of an existing file. A missing file yields an empty
  /// store bound to that path. Throws TranscriptFormatError or IoError.
  static std::shared_ptr<TranscriptStore> open(const std::string& path);

  [[nodiscard]] std::optional<TranscriptRecord> find(std::string_view fingerprint) const;
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

  /// Appends one line (when bound to a file) and replaces any earlier record
  /// with the same fingerprint. Throws IoError.
  void record(const TranscriptRecord& record);

 private:
  void insert(TranscriptRecord record, bool notice);

  std::string path_;
  mutable std::mutex mutex_;
  std::map<std::string, TranscriptRecord, std::less<>> records_;
};

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  int timeout_seconds = 60;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Connection failures throw LlmError(unavailable), timeouts LlmError(timeout).
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

/// HTTPS/HTTP client backed by cpp-httplib.
std::shared_ptr<HttpTransport> make_default_transport();

using Sleeper = std::function<void(std::chrono::milliseconds)>;
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Delay before retry k (0-based): 500 ms doubled k times, capped at the
/// per-attempt timeout.
std::chrono::milliseconds backoff_delay(int retry, int timeout_seconds);

class Gateway {
 public:
  struct Options {
    std::shared_ptr<HttpTransport> transport;     // default: make_default_transport()
    std::shared_ptr<TranscriptStore> transcript;  // default: opened from config.transcript_path
    Sleeper sleeper;                              // default: std::this_thread::sleep_for
    EnvLookup env;                                // default: std::getenv
  };

  explicit Gateway(BackendConfig config) : Gateway(std::move(config), Options{}) {}
  Gateway(BackendConfig config, Options options);
  ~Gateway();
  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  /// Returns the model's reply. Throws LlmError, or IoError when recording fails.
  std::string complete(const std::string& prompt);

  [[nodiscard]] const BackendConfig& config() const noexcept { return config_; }
  [[nodiscard]] std::size_t live_calls() const noexcept;

 private:
  std::string complete_live(const std::string& prompt);

  struct Limiter;
  BackendConfig config_;
  Options options_;
  std::unique_ptr<Limiter> limiter_;
};

/// One-shot convenience over Gateway.
std::string complete(const std::string& prompt, const BackendConfig& config);

}  // namespace dmnprompt::llm
