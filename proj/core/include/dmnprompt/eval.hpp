#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Human labels over generated feedback and the metrics derived from them.
// The positive class is "violation flagged".
namespace dmnprompt::eval {

struct LabelRecord {
  std::string case_id;
  std::string rule_name;
  bool gold_violation = false;       // the rule was not correctly applied
  bool predicted_violation = false;  // the feedback flags a problem
  std::optional<bool> feedback_correct;
  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

enum class EvalErrorKind { schema_error, duplicate_key, empty_input, missing_feedback_labels };

std::string_view to_string(EvalErrorKind kind) noexcept;

class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), kind_(kind), line_(line) {}
  [[nodiscard]] EvalErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t line() const noexcept { return line_; }  // 0 when not tied to a line

 private:
  EvalErrorKind kind_;
  std::size_t line_;
};

/// JSONL {case_id, rule, gold_violation, predicted_violation, feedback_correct?}.
/// Throws EvalError(schema_error / duplicate_key).
std::vector<LabelRecord> parse_labels_jsonl(std::string_view text, const std::string& source = "labels");
/// Throws IoError as well.
std::vector<LabelRecord> load_labels(const std::string& path);

std::string to_jsonl_line(const LabelRecord& record);

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
  [[nodiscard]] std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Throws EvalError(empty_input).
ConfusionCounts confusion(const std::vector<LabelRecord>& records);

/// Exact non-negative fraction; den > 0.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  [[nodiscard]] double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Half-up rounding to `digits` decimals, computed from the integers.
std::string format_half_up(const Ratio& r, int digits = 2);

struct MetricsReport {
  ConfusionCounts counts;
  std::optional<Ratio> precision;  // null when tp + fp = 0
  std::optional<Ratio> recall;     // null when tp + fn = 0
  std::optional<Ratio> f1;         // null unless precision and recall are both defined
  Ratio accuracy;
};

/// Throws std::invalid_argument when the counts are all zero.
MetricsReport metrics(const ConfusionCounts& counts);

struct RuleAccuracyRow {
  std::string rule_name;  // "overall" for the final row
  std::uint64_t n = 0;
  std::uint64_t correct_feedback_count = 0;
  Ratio accuracy;
};

/// One row per rule in first-appearance order, then an overall row.
/// Throws EvalError(missing_feedback_labels / empty_input).
std::vector<RuleAccuracyRow> per_rule_report(const std::vector<LabelRecord>& records);

std::string render_metrics_text(const MetricsReport& report);
std::string render_metrics_json(const MetricsReport& report, const std::vector<RuleAccuracyRow>* per_rule = nullptr);
std::string render_per_rule_text(const std::vector<RuleAccuracyRow>& rows);

}  // namespace dmnprompt::eval
