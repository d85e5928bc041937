#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmnprompt/dmn.hpp"
#include "dmnprompt/feel.hpp"

// Deterministic evaluation of decision tables and triples: the local oracle
// for what the prompt asks the model to do.
namespace dmnprompt::feel {

struct TableResult {
  std::size_t matched_rule_index = 0;  // 1-based
  Value output;                        // first output entry
  std::vector<Value> outputs;          // all output entries
};

/// Decision table with every cell parsed once; reusable across contexts.
class CompiledTable {
 public:
  /// Throws FeelError when a cell does not parse.
  explicit CompiledTable(const dmn::DecisionTable& table);

  /// FIRST: lowest-indexed matching rule. UNIQUE: also checks that no other
  /// rule matches. Throws FeelError(no_match / uniqueness_violation /
  /// unbound_variable / type_mismatch).
  [[nodiscard]] TableResult evaluate(const EvaluationContext& ctx) const;

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::size_t rule_count() const noexcept { return rules_.size(); }

 private:
  struct Rule {
    std::vector<UnaryTest> tests;
    std::vector<Value> outputs;
  };
  std::string name_;
  dmn::HitPolicy policy_;
  std::vector<std::string> variables_;
  std::vector<Rule> rules_;
};

TableResult eval_decision_table(const dmn::DecisionTable& table, const EvaluationContext& ctx);

struct EvalFailure {
  ErrorKind kind;
  std::string detail;
  friend bool operator==(const EvalFailure&, const EvalFailure&) = default;
};

/// Result of evaluating one triple. On success message, table_output and
/// matched_rule_index are all present; on failure `error` is set instead.
struct RuleOutcome {
  std::string rule_name;
  std::optional<std::size_t> matched_rule_index;
  std::optional<Value> table_output;
  std::optional<std::string> message;
  std::optional<EvalFailure> error;

  [[nodiscard]] bool ok() const noexcept { return !error.has_value(); }
  friend bool operator==(const RuleOutcome&, const RuleOutcome&) = default;
};

/// Table, then literal expression with the table output bound under the
/// output clause name and the table's decision name. Throws FeelError.
RuleOutcome evaluate_triple(const dmn::Triple& triple, const EvaluationContext& ctx);

/// One outcome per triple; a failing triple yields an error-marked outcome
/// without aborting the others.
std::vector<RuleOutcome> evaluate_triples(const std::vector<dmn::Triple>& triples, const EvaluationContext& ctx);

/// extract_triples + evaluate_triples. Throws DmnError when triples cannot
/// be extracted.
std::vector<RuleOutcome> evaluate_model(const dmn::DecisionModel& model, const EvaluationContext& ctx);

}  // namespace dmnprompt::feel
