#include "dmnprompt/engine.hpp"

namespace dmnprompt::feel {

CompiledTable::CompiledTable(const dmn::DecisionTable& table) : name_(table.name), policy_(table.hit_policy) {
  if (table.output_clauses.empty()) {
    throw FeelError(ErrorKind::syntax_error, "decision table '" + table.name + "' has no output clause");
  }
  for (const auto& clause : table.input_clauses) variables_.push_back(clause.expression);
  rules_.reserve(table.rules.size());
  for (std::size_t r = 0; r < table.rules.size(); ++r) {
    const auto& src = table.rules[r];
    if (src.input_entries.size() != table.input_clauses.size() ||
        src.output_entries.size() != table.output_clauses.size()) {
      throw FeelError(ErrorKind::syntax_error,
                      "rule " + std::to_string(r + 1) + " of '" + table.name + "' does not match the table's columns");
    }
    Rule rule;
    for (std::size_t c = 0; c < src.input_entries.size(); ++c) {
      rule.tests.push_back(parse_unary_test(src.input_entries[c], table.input_clauses[c].value_type));
    }
    for (std::size_t c = 0; c < src.output_entries.size(); ++c) {
      rule.outputs.push_back(parse_literal(src.output_entries[c], table.output_clauses[c].value_type));
    }
    rules_.push_back(std::move(rule));
  }
}

TableResult CompiledTable::evaluate(const EvaluationContext& ctx) const {
  std::vector<const Value*> inputs;
  inputs.reserve(variables_.size());
  for (const auto& v : variables_) {
    const Value* bound = ctx.find(v);
    if (bound == nullptr) {
      throw FeelError(ErrorKind::unbound_variable,
                      "decision table '" + name_ + "' needs '" + v + "' but it is not bound");
    }
    inputs.push_back(bound);
  }

  auto rule_matches = [&](const Rule& rule) {
    for (std::size_t c = 0; c < rule.tests.size(); ++c) {
      if (!rule.tests[c].matches(*inputs[c])) return false;
    }
    return true;
  };

  std::optional<std::size_t> hit;
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    if (!rule_matches(rules_[r])) continue;
    if (!hit) {
      hit = r;
      if (policy_ == dmn::HitPolicy::first) break;
    } else {
      throw FeelError(ErrorKind::uniqueness_violation, "decision table '" + name_ + "' (UNIQUE): rules " +
                                                           std::to_string(*hit + 1) + " and " +
                                                           std::to_string(r + 1) + " both match");
    }
  }
  if (!hit) throw FeelError(ErrorKind::no_match, "no rule of decision table '" + name_ + "' matches");

  const Rule& rule = rules_[*hit];
  return TableResult{*hit + 1, rule.outputs.front(), rule.outputs};
}

TableResult eval_decision_table(const dmn::DecisionTable& table, const EvaluationContext& ctx) {
  return CompiledTable(table).evaluate(ctx);
}

RuleOutcome evaluate_triple(const dmn::Triple& triple, const EvaluationContext& ctx) {
  TableResult table = eval_decision_table(triple.table, ctx);
  IfChain chain = parse_literal_expression(triple.literal.expression_text);

  EvaluationContext scope = ctx;
  for (std::size_t c = 0; c < triple.table.output_clauses.size() && c < table.outputs.size(); ++c) {
    const auto& name = triple.table.output_clauses[c].name;
    if (!name.empty()) scope.bind(name, table.outputs[c]);
  }
  scope.bind(triple.table.name, table.output);

  RuleOutcome out;
  out.rule_name = triple.rule_name;
  out.matched_rule_index = table.matched_rule_index;
  out.table_output = table.output;
  out.message = eval_literal_expression(chain, scope);
  return out;
}

std::vector<RuleOutcome> evaluate_triples(const std::vector<dmn::Triple>& triples, const EvaluationContext& ctx) {
  std::vector<RuleOutcome> out;
  out.reserve(triples.size());
  for (const auto& t : triples) {
    try {
      out.push_back(evaluate_triple(t, ctx));
    } catch (const FeelError& e) {
      RuleOutcome failed;
      failed.rule_name = t.rule_name;
      failed.error = EvalFailure{e.kind(), e.what()};
      out.push_back(std::move(failed));
    }
  }
  return out;
}

std::vector<RuleOutcome> evaluate_model(const dmn::DecisionModel& model, const EvaluationContext& ctx) {
  return evaluate_triples(dmn::extract_triples(model), ctx);
}

}  // namespace dmnprompt::feel
