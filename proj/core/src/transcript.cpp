#include <filesystem>
#include <sstream>

#include "dmnprompt/llm.hpp"
#include "dmnprompt/log.hpp"
#include "json.hpp"

namespace dmnprompt::llm {

using nlohmann::json;

std::string to_jsonl_line(const TranscriptRecord& r) {
  json j = {{"fingerprint", r.fingerprint},
            {"backend", to_string(r.backend)},
            {"model", r.model},
            {"prompt", r.prompt},
            {"response", r.response},
            {"created_at", r.created_at},
            {"tokens_in", r.tokens_in ? json(*r.tokens_in) : json(nullptr)},
            {"tokens_out", r.tokens_out ? json(*r.tokens_out) : json(nullptr)}};
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

namespace {

std::string required_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::int64_t> optional_count(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) throw std::invalid_argument(std::string("field '") + key + "' must be an integer");
  return it->get<std::int64_t>();
}

TranscriptRecord parse_record(const std::string& line) {
  json j = json::parse(line);
  if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
  TranscriptRecord r;
  r.fingerprint = required_string(j, "fingerprint");
  auto kind = backend_kind_from_string(required_string(j, "backend"));
  if (!kind) throw std::invalid_argument("unknown backend '" + j["backend"].get<std::string>() + "'");
  r.backend = *kind;
  r.model = required_string(j, "model");
  r.prompt = required_string(j, "prompt");
  r.response = required_string(j, "response");
  r.created_at = required_string(j, "created_at");
  r.tokens_in = optional_count(j, "tokens_in");
  r.tokens_out = optional_count(j, "tokens_out");
  return r;
}

}  // namespace

std::shared_ptr<TranscriptStore> TranscriptStore::open(const std::string& path) {
  auto store = std::make_shared<TranscriptStore>(path);
  if (!std::filesystem::exists(path)) return store;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      store->insert(parse_record(line), true);
    } catch (const json::exception& e) {
      throw TranscriptFormatError(path, n, e.what());
    } catch (const std::invalid_argument& e) {
      throw TranscriptFormatError(path, n, e.what());
    }
  }
  return store;
}

std::optional<TranscriptRecord> TranscriptStore::find(std::string_view fp) const {
  std::lock_guard lock(mutex_);
  auto it = records_.find(fp);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::size_t TranscriptStore::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

void TranscriptStore::record(const TranscriptRecord& r) {
  std::lock_guard lock(mutex_);
  if (!path_.empty()) append_to_file(path_, to_jsonl_line(r) + "\n");
  insert(r, true);
}

void TranscriptStore::insert(TranscriptRecord r, bool notice) {
  auto [it, inserted] = records_.try_emplace(r.fingerprint, r);
  if (!inserted) {
    if (notice) log::info("transcript: fingerprint " + r.fingerprint.substr(0, 12) + " recorded again, keeping the latest");
    it->second = std::move(r);
  }
}

}  // namespace dmnprompt::llm
