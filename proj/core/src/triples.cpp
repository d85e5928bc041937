#include <algorithm>
#include <set>

#include "dmnprompt/dmn.hpp"

namespace dmnprompt::dmn {

std::string rule_name_for(const DecisionModel& model, const DecisionTable& table, std::vector<std::string>* warnings) {
  std::vector<std::string> texts;
  for (const auto& a : model.annotations) {
    if (std::find(a.attached_to.begin(), a.attached_to.end(), table.id) != a.attached_to.end() && !a.text.empty()) {
      texts.push_back(a.text);
    }
  }
  if (texts.empty()) return table.name;
  std::sort(texts.begin(), texts.end());
  if (texts.size() > 1 && warnings != nullptr) {
    warnings->push_back("decision table '" + table.name + "' has " + std::to_string(texts.size()) +
                        " annotations; using '" + texts.front() + "'");
  }
  return texts.front();
}

std::vector<Triple> extract_triples(const DecisionModel& model, std::vector<std::string>* warnings) {
  std::vector<Triple> out;
  out.reserve(model.tables.size());
  for (const auto& table : model.tables) {
    std::vector<const LiteralExpressionDecision*> consumers;
    std::vector<InputDataElement> inputs;
    for (const auto& e : model.requirements) {
      if (e.kind != RequirementKind::information) continue;
      if (e.source == table.id) {
        if (const auto* lit = model.find_literal(e.target)) {
          if (std::find(consumers.begin(), consumers.end(), lit) == consumers.end()) consumers.push_back(lit);
        }
      }
      if (e.target == table.id) {
        if (const auto* in = model.find_input(e.source)) {
          if (std::find(inputs.begin(), inputs.end(), *in) == inputs.end()) inputs.push_back(*in);
        }
      }
    }
    if (consumers.empty()) {
      throw DmnError(DmnErrorKind::orphan_table,
                     "decision table '" + table.name + "' feeds no literal expression");
    }
    if (consumers.size() > 1) {
      throw DmnError(DmnErrorKind::ambiguous_literal, "decision table '" + table.name + "' feeds " +
                                                          std::to_string(consumers.size()) +
                                                          " literal expressions");
    }
    out.push_back(Triple{rule_name_for(model, table, warnings), std::move(inputs), table, *consumers.front()});
  }
  return out;
}

DecisionModel submodel_for(const DecisionModel& model, const Triple& triple) {
  DecisionModel sub;
  sub.id = model.id;
  sub.name = model.name;
  sub.target_namespace = model.target_namespace;
  sub.input_data = triple.inputs;
  sub.tables.push_back(triple.table);
  sub.literals.push_back(triple.literal);

  std::set<std::string> ids;
  for (const auto& in : triple.inputs) ids.insert(in.id);
  ids.insert(triple.table.id);
  ids.insert(triple.literal.id);

  for (const auto& a : model.annotations) {
    if (std::find(a.attached_to.begin(), a.attached_to.end(), triple.table.id) == a.attached_to.end()) continue;
    Annotation copy = a;
    std::erase_if(copy.attached_to, [&](const std::string& id) { return !ids.count(id); });
    ids.insert(a.id);
    sub.annotations.push_back(std::move(copy));
  }
  for (const auto& e : model.requirements) {
    if (ids.count(e.source) && ids.count(e.target)) sub.requirements.push_back(e);
  }
  return sub;
}

}  // namespace dmnprompt::dmn
