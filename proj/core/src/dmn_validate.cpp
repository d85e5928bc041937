#include <algorithm>
#include <map>

#include "dmnprompt/dmn.hpp"
#include "dmnprompt/feel.hpp"

namespace dmnprompt::dmn {

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::duplicate_id:
      return "DuplicateId";
    case ViolationKind::dangling_reference:
      return "DanglingReference";
    case ViolationKind::arity_mismatch:
      return "ArityMismatch";
    case ViolationKind::missing_requirement:
      return "MissingRequirement";
    case ViolationKind::empty_name:
      return "EmptyName";
    case ViolationKind::invalid_expression:
      return "InvalidExpression";
  }
  return "Violation";
}

std::vector<Violation> validate(const DecisionModel& model) {
  std::vector<Violation> out;
  auto report = [&](ViolationKind kind, const std::string& id, std::string message) {
    out.push_back({kind, id, std::move(message)});
  };

  std::map<std::string, int> id_count;
  for (const auto& e : model.input_data) ++id_count[e.id];
  for (const auto& e : model.tables) ++id_count[e.id];
  for (const auto& e : model.literals) ++id_count[e.id];
  for (const auto& e : model.annotations) ++id_count[e.id];
  for (const auto& [id, n] : id_count) {
    if (n > 1) report(ViolationKind::duplicate_id, id, "id is used by " + std::to_string(n) + " elements");
    if (id.empty()) report(ViolationKind::empty_name, id, "element without id");
  }

  for (const auto& e : model.input_data) {
    if (e.name.empty()) report(ViolationKind::empty_name, e.id, "input data has no name");
  }

  for (const auto& edge : model.requirements) {
    for (const std::string* end : {&edge.source, &edge.target}) {
      if (!model.has_element(*end)) {
        report(ViolationKind::dangling_reference, *end,
               "requirement " + edge.source + " -> " + edge.target + " references unknown element '" + *end + "'");
      }
    }
  }

  auto is_decision = [&](std::string_view id) { return model.find_table(id) || model.find_literal(id); };

  for (const auto& t : model.tables) {
    if (t.name.empty()) report(ViolationKind::empty_name, t.id, "decision table has no name");
    bool required = std::any_of(model.requirements.begin(), model.requirements.end(), [&](const RequirementEdge& e) {
      return e.kind == RequirementKind::information && e.target == t.id &&
             (model.find_input(e.source) || is_decision(e.source));
    });
    if (!required) {
      report(ViolationKind::missing_requirement, t.id, "decision table '" + t.name + "' has no information requirement on a known element");
    }
    if (t.output_clauses.empty()) report(ViolationKind::arity_mismatch, t.id, "decision table has no output clause");

    for (std::size_t r = 0; r < t.rules.size(); ++r) {
      const auto& rule = t.rules[r];
      const std::string where = "rule " + std::to_string(r + 1) + " of '" + t.name + "'";
      if (rule.input_entries.size() != t.input_clauses.size()) {
        report(ViolationKind::arity_mismatch, t.id,
               where + " has " + std::to_string(rule.input_entries.size()) + " input entries for " +
                   std::to_string(t.input_clauses.size()) + " input clauses");
      }
      if (rule.output_entries.size() != t.output_clauses.size()) {
        report(ViolationKind::arity_mismatch, t.id,
               where + " has " + std::to_string(rule.output_entries.size()) + " output entries for " +
                   std::to_string(t.output_clauses.size()) + " output clauses");
      }
      for (std::size_t c = 0; c < rule.input_entries.size() && c < t.input_clauses.size(); ++c) {
        try {
          (void)feel::parse_unary_test(rule.input_entries[c], t.input_clauses[c].value_type);
        } catch (const feel::FeelError& e) {
          report(ViolationKind::invalid_expression, t.id, where + ", input " + std::to_string(c + 1) + ": " + e.what());
        }
      }
      for (std::size_t c = 0; c < rule.output_entries.size() && c < t.output_clauses.size(); ++c) {
        try {
          (void)feel::parse_literal(rule.output_entries[c], t.output_clauses[c].value_type);
        } catch (const feel::FeelError& e) {
          report(ViolationKind::invalid_expression, t.id,
                 where + ", output " + std::to_string(c + 1) + ": " + e.what());
        }
      }
    }
  }

  for (const auto& l : model.literals) {
    if (l.name.empty()) report(ViolationKind::empty_name, l.id, "literal expression has no name");
    try {
      (void)feel::parse_literal_expression(l.expression_text);
    } catch (const feel::FeelError& e) {
      report(ViolationKind::invalid_expression, l.id, e.what());
    }
  }

  for (const auto& a : model.annotations) {
    for (const auto& target : a.attached_to) {
      if (!model.has_element(target)) {
        report(ViolationKind::dangling_reference, a.id, "annotation attached to unknown element '" + target + "'");
      }
    }
  }
  return out;
}

}  // namespace dmnprompt::dmn
