#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dmnprompt/value.hpp"

namespace dmnprompt::dmn {

inline constexpr std::string_view kDmn13Namespace = "https://www.omg.org/spec/DMN/20191111/MODEL/";
inline constexpr std::string_view kDmn12Namespace = "http://www.omg.org/spec/DMN/20180521/MODEL/";
inline constexpr std::string_view kDmn11Namespace = "http://www.omg.org/spec/DMN/20151101/dmn.xsd";

struct InputDataElement {
  std::string id;
  std::string name;
  ValueType value_type = ValueType::text;
  friend bool operator==(const InputDataElement&, const InputDataElement&) = default;
};

enum class HitPolicy { first, unique };

std::string_view to_string(HitPolicy policy) noexcept;

struct InputClause {
  std::string label;
  std::string expression;  // variable name the column tests
  ValueType value_type = ValueType::text;
  friend bool operator==(const InputClause&, const InputClause&) = default;
};

struct OutputClause {
  std::string name;
  ValueType value_type = ValueType::text;
  friend bool operator==(const OutputClause&, const OutputClause&) = default;
};

struct TableRule {
  std::vector<std::string> input_entries;   // unary-test source text
  std::vector<std::string> output_entries;  // literal source text
  friend bool operator==(const TableRule&, const TableRule&) = default;
};

struct DecisionTable {
  std::string id;  // id of the owning <decision>
  std::string name;
  HitPolicy hit_policy = HitPolicy::first;
  std::vector<InputClause> input_clauses;
  std::vector<OutputClause> output_clauses;
  std::vector<TableRule> rules;  // evaluation is positional
  friend bool operator==(const DecisionTable&, const DecisionTable&) = default;
};

struct LiteralExpressionDecision {
  std::string id;
  std::string name;
  std::string expression_text;
  std::vector<std::string> referenced_variables;
  friend bool operator==(const LiteralExpressionDecision&, const LiteralExpressionDecision&) = default;
};

struct Annotation {
  std::string id;
  std::string text;
  std::vector<std::string> attached_to;
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

enum class RequirementKind { information, association };

/// information: source is required by target. association: annotation link.
struct RequirementEdge {
  std::string source;
  std::string target;
  RequirementKind kind = RequirementKind::information;
  friend bool operator==(const RequirementEdge&, const RequirementEdge&) = default;
};

/// Requirement order is canonical: information edges grouped by requiring
/// decision (tables in order, then literals), then associations.
struct DecisionModel {
  std::string id;
  std::string name;
  std::string target_namespace;
  std::vector<InputDataElement> input_data;
  std::vector<DecisionTable> tables;
  std::vector<LiteralExpressionDecision> literals;
  std::vector<Annotation> annotations;
  std::vector<RequirementEdge> requirements;

  [[nodiscard]] const InputDataElement* find_input(std::string_view id) const;
  [[nodiscard]] const DecisionTable* find_table(std::string_view id) const;
  [[nodiscard]] const LiteralExpressionDecision* find_literal(std::string_view id) const;
  [[nodiscard]] bool has_element(std::string_view id) const;

  friend bool operator==(const DecisionModel&, const DecisionModel&) = default;
};

// ---------------------------------------------------------------------------
// Loading

enum class DmnErrorKind {
  malformed_xml,
  unsupported_namespace,
  missing_required_attribute,
  duplicate_id,
  orphan_table,
  ambiguous_literal,
};

std::string_view to_string(DmnErrorKind kind) noexcept;

class DmnError : public std::runtime_error {
 public:
  DmnError(DmnErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] DmnErrorKind kind() const noexcept { return kind_; }

 private:
  DmnErrorKind kind_;
};

struct ParsedModel {
  DecisionModel model;
  std::vector<std::string> warnings;
};

/// Reads the supported DMN subset. Unsupported constructs become warnings.
ParsedModel parse_dmn(std::string_view document);
ParsedModel load_dmn_file(const std::string& path);

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  duplicate_id,
  dangling_reference,
  arity_mismatch,
  missing_requirement,
  empty_name,
  invalid_expression,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string element_id;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate(const DecisionModel& model);

// ---------------------------------------------------------------------------
// Triples

struct Triple {
  std::string rule_name;
  std::vector<InputDataElement> inputs;
  DecisionTable table;
  LiteralExpressionDecision literal;
  friend bool operator==(const Triple&, const Triple&) = default;
};

/// One triple per table, in table order. Throws DmnError(orphan_table /
/// ambiguous_literal). Naming conflicts are reported through `warnings`.
std::vector<Triple> extract_triples(const DecisionModel& model, std::vector<std::string>* warnings = nullptr);

/// Rule name for a table: lexicographically first attached annotation text,
/// falling back to the table name.
std::string rule_name_for(const DecisionModel& model, const DecisionTable& table,
                          std::vector<std::string>* warnings = nullptr);

/// Copy of `model` restricted to the elements of one triple.
DecisionModel submodel_for(const DecisionModel& model, const Triple& triple);

// ---------------------------------------------------------------------------
// Rendering

enum class RenderStyle { compact_text, raw_xml };

std::string_view to_string(RenderStyle style) noexcept;
std::optional<RenderStyle> render_style_from_string(std::string_view text) noexcept;

/// Deterministic rendering (LF line endings). compact_text is the prompt
/// embedding; raw_xml is normalized DMN 1.3 that parses back to `model`.
std::string render_canonical(const DecisionModel& model, RenderStyle style);

/// The compact_text block for one decision table: a heading line followed by
/// an aligned grid of canonical cells, every line indented by two spaces.
std::string render_table_block(const DecisionTable& table);

}  // namespace dmnprompt::dmn
