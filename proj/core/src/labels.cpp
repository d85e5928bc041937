#include <set>

#include "dmnprompt/eval.hpp"
#include "dmnprompt/io.hpp"
#include "json.hpp"

namespace dmnprompt::eval {

using json = nlohmann::ordered_json;

std::string_view to_string(EvalErrorKind kind) noexcept {
  switch (kind) {
    case EvalErrorKind::schema_error: return "SchemaError";
    case EvalErrorKind::duplicate_key: return "DuplicateKey";
    case EvalErrorKind::empty_input: return "EmptyInput";
    case EvalErrorKind::missing_feedback_labels: return "MissingFeedbackLabels";
  }
  return "?";
}

namespace {

std::string string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw std::invalid_argument(std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

bool bool_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_boolean()) throw std::invalid_argument(std::string("'") + key + "' must be a boolean");
  return it->get<bool>();
}

}  // namespace

std::vector<LabelRecord> parse_labels_jsonl(std::string_view text, const std::string& source) {
  std::vector<LabelRecord> out;
  std::set<std::pair<std::string, std::string>> keys;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    LabelRecord r;
    try {
      json j = json::parse(line);
      if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
      r.case_id = string_field(j, "case_id");
      r.rule_name = string_field(j, "rule");
      r.gold_violation = bool_field(j, "gold_violation");
      r.predicted_violation = bool_field(j, "predicted_violation");
      if (j.contains("feedback_correct") && !j["feedback_correct"].is_null()) {
        r.feedback_correct = bool_field(j, "feedback_correct");
      }
    } catch (const json::exception& e) {
      throw EvalError(EvalErrorKind::schema_error, source + ":" + std::to_string(line_no) + ": " + e.what(), line_no);
    } catch (const std::invalid_argument& e) {
      throw EvalError(EvalErrorKind::schema_error, source + ":" + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    if (!keys.insert({r.case_id, r.rule_name}).second) {
      throw EvalError(EvalErrorKind::duplicate_key,
                      source + ":" + std::to_string(line_no) + ": duplicate label for case '" + r.case_id +
                          "' and rule '" + r.rule_name + "'",
                      line_no);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<LabelRecord> load_labels(const std::string& path) { return parse_labels_jsonl(read_file(path), path); }

std::string to_jsonl_line(const LabelRecord& r) {
  json j = {{"case_id", r.case_id},
            {"rule", r.rule_name},
            {"gold_violation", r.gold_violation},
            {"predicted_violation", r.predicted_violation}};
  if (r.feedback_correct) j["feedback_correct"] = *r.feedback_correct;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace dmnprompt::eval
