#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dmnprompt/value.hpp"

// FEEL subset used by decision-table cells and message-selecting literal
// expressions.
//
//   unary tests  := "-" | test ("," test)*
//   test         := ("<" | "<=" | ">" | ">=") literal
//                 | ("[" | "(" | "]") literal ".." literal ("]" | ")" | "[")
//                 | literal
//   literal      := number | string | true | false
//
//   literal expr := string
//                 | "if" cond "then" string ("else" "if" cond "then" string)* "else" string
//   cond         := name ("=" | "!=") literal
//
// Numbers accept thousands separators ("50,000"): a comma immediately
// followed by exactly three digits continues the number, any other comma
// separates disjuncts.
namespace dmnprompt::feel {

enum class ErrorKind {
  syntax_error,
  type_mismatch,
  unsupported_construct,
  no_match,
  uniqueness_violation,
  unbound_variable,
};

std::string_view to_string(ErrorKind kind) noexcept;

class FeelError : public std::runtime_error {
 public:
  FeelError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

enum class CompareOp { less, less_equal, greater, greater_equal };

struct Wildcard {
  friend bool operator==(const Wildcard&, const Wildcard&) = default;
};

struct Comparison {
  CompareOp op;
  Value operand;
  friend bool operator==(const Comparison&, const Comparison&) = default;
};

struct Equality {
  Value operand;
  friend bool operator==(const Equality&, const Equality&) = default;
};

struct Interval {
  Value lower;
  bool lower_closed = true;
  Value upper;
  bool upper_closed = true;
  friend bool operator==(const Interval&, const Interval&) = default;
};

using SimpleTest = std::variant<Comparison, Equality, Interval>;

struct Disjunction {
  std::vector<SimpleTest> alternatives;
  friend bool operator==(const Disjunction&, const Disjunction&) = default;
};

/// One decision-table input cell.
class UnaryTest {
 public:
  using Node = std::variant<Wildcard, Comparison, Equality, Interval, Disjunction>;

  UnaryTest() : node_(Wildcard{}) {}
  explicit UnaryTest(Node node);

  [[nodiscard]] const Node& node() const noexcept { return node_; }
  [[nodiscard]] bool is_wildcard() const noexcept { return std::holds_alternative<Wildcard>(node_); }

  /// Type of the operands, nullopt for the wildcard.
  [[nodiscard]] std::optional<ValueType> operand_type() const;

  /// Throws FeelError(type_mismatch) when `value` cannot be compared with
  /// the operands. Text equality is byte-exact.
  [[nodiscard]] bool matches(const Value& value) const;

  /// Canonical source form: "> 50000", "[1..5)", "\"A\", \"B\"", "-".
  [[nodiscard]] std::string to_feel() const;

  friend bool operator==(const UnaryTest&, const UnaryTest&) = default;

 private:
  Node node_;
};

/// Parses a cell. `expected` (when known) is enforced on every operand.
UnaryTest parse_unary_test(std::string_view source, std::optional<ValueType> expected = std::nullopt);

bool eval_unary_test(const UnaryTest& test, const Value& value);

/// Parses a single literal ("Approved" quoted, number, boolean).
Value parse_literal(std::string_view source, std::optional<ValueType> expected = std::nullopt);

/// True when every non-wildcard operand of the cell is numeric and at least
/// one such operand exists. Used for typeRef inference.
bool is_numeric_cell(std::string_view source);

enum class EqualityOp { equal, not_equal };

struct Condition {
  std::string variable;
  EqualityOp op = EqualityOp::equal;
  Value value;
  friend bool operator==(const Condition&, const Condition&) = default;
};

struct Branch {
  Condition condition;
  std::string consequent;
  friend bool operator==(const Branch&, const Branch&) = default;
};

/// if / else-if / else chain selecting a message.
struct IfChain {
  std::vector<Branch> branches;
  std::string default_message;

  /// Distinct variables in first-reference order.
  [[nodiscard]] std::vector<std::string> referenced_variables() const;

  friend bool operator==(const IfChain&, const IfChain&) = default;
};

IfChain parse_literal_expression(std::string_view source);

/// Conditions comparing values of different types do not hold (FEEL null).
std::string eval_literal_expression(const IfChain& chain, const EvaluationContext& ctx);

}  // namespace dmnprompt::feel
