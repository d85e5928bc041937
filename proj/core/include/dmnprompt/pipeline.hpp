#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmnprompt/dmn.hpp"
#include "dmnprompt/engine.hpp"
#include "dmnprompt/io.hpp"
#include "dmnprompt/llm.hpp"
#include "dmnprompt/prompt.hpp"

namespace dmnprompt::pipeline {

/// Opening and closing markers of one rule block in a model response:
/// <<RULE: name>> message <<END>>
inline constexpr std::string_view kRuleOpen = "<<RULE:";
inline constexpr std::string_view kRuleClose = ">>";
inline constexpr std::string_view kEnd = "<<END>>";

struct CaseInput {
  std::string case_id;
  std::string input_text;
  std::optional<EvaluationContext> structured_ctx;
};

enum class ParseStatus { ok, missing, malformed };

std::string_view to_string(ParseStatus status) noexcept;

struct OutcomeEntry {
  std::string rule_name;
  std::string message;
  ParseStatus parse_status = ParseStatus::missing;
  friend bool operator==(const OutcomeEntry&, const OutcomeEntry&) = default;
};

struct CaseError {
  std::string kind;
  std::string message;
  friend bool operator==(const CaseError&, const CaseError&) = default;
};

struct CaseResult {
  std::string case_id;
  prompt::PromptVariant variant = prompt::PromptVariant::dmn_guided;
  std::string raw_response;
  std::vector<OutcomeEntry> outcomes;  // one per triple, triple order
  std::optional<std::vector<feel::RuleOutcome>> oracle_outcomes;
  std::optional<std::vector<bool>> agreement;
  std::optional<CaseError> error;
};

/// Rule names compare after trimming, collapsing inner whitespace and
/// ASCII case folding.
std::string normalize_rule_name(std::string_view name);

/// Total: never throws, whatever the bytes. One entry per rule name, in order.
std::vector<OutcomeEntry> parse_llm_output(std::string_view raw, const std::vector<std::string>& rule_names);
std::vector<OutcomeEntry> parse_llm_output(std::string_view raw, const std::vector<dmn::Triple>& triples);

/// Formats outcomes in the response envelope; parse_llm_output inverts it.
std::string format_envelope(const std::vector<std::pair<std::string, std::string>>& messages);

struct RunOptions {
  prompt::PromptVariant variant = prompt::PromptVariant::dmn_guided;
  prompt::PromptOptions prompt_options;
  bool per_rule_calls = false;
  int parallelism = 4;
};

/// Builds the prompt(s) for one case, queries the gateway and parses the
/// reply. Throws LlmError, DmnError or std::invalid_argument.
CaseResult run_case(const dmn::DecisionModel& model, const CaseInput& input, const RunOptions& options,
                    llm::Gateway& gateway, const prompt::PromptBuilder& builder = prompt::PromptBuilder());

/// Every prompt run_case would send for the input, in sending order.
std::vector<std::string> prompts_for_case(const dmn::DecisionModel& model, const CaseInput& input,
                                          const RunOptions& options,
                                          const prompt::PromptBuilder& builder = prompt::PromptBuilder());

struct RunManifest {
  std::string template_version;
  RunOptions options;
  llm::BackendConfig backend;
  std::string model_name;
  std::string model_hash;
  std::size_t case_count = 0;
  std::size_t error_count = 0;
  std::string started_at;
  std::string finished_at;
};

struct BatchResult {
  std::vector<CaseResult> results;  // input order
  RunManifest manifest;
};

/// Runs cases with bounded parallelism. A failing case is recorded with its
/// error and does not stop the others. Throws std::invalid_argument on
/// duplicate case ids.
BatchResult run_batch(const dmn::DecisionModel& model, const std::vector<CaseInput>& cases,
                      const RunOptions& options, llm::Gateway& gateway,
                      const prompt::PromptBuilder& builder = prompt::PromptBuilder());

class FormatError : public IoError {
 public:
  FormatError(const std::string& source, std::size_t line, const std::string& detail)
      : IoError(source + ":" + std::to_string(line) + ": " + detail), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses an evaluation context from a JSON object text. Throws
/// std::invalid_argument.
EvaluationContext parse_context_json(std::string_view json_text);

/// JSONL {case_id, input_text, ctx?}. Throws FormatError.
std::vector<CaseInput> parse_cases_jsonl(std::string_view text, const std::string& source = "cases");
std::vector<CaseInput> load_cases(const std::string& path);

std::string to_jsonl_line(const CaseResult& result);
std::vector<CaseResult> parse_results_jsonl(std::string_view text, const std::string& source = "results");
std::vector<CaseResult> load_results(const std::string& path);

std::string manifest_to_json(const RunManifest& manifest);

}  // namespace dmnprompt::pipeline
