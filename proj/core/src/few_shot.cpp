#include "dmnprompt/engine.hpp"
#include "dmnprompt/prompt.hpp"

namespace dmnprompt::prompt {

namespace {

dmn::DecisionTable single_input_table(std::string name, std::string input, ValueType input_type, std::string output,
                                      std::vector<std::pair<std::string, std::string>> rows) {
  dmn::DecisionTable t;
  t.id = name;
  t.name = std::move(name);
  t.input_clauses.push_back({input, input, input_type});
  t.output_clauses.push_back({std::move(output), ValueType::text});
  for (auto& [cell, out] : rows) t.rules.push_back({{std::move(cell)}, {std::move(out)}});
  return t;
}

std::vector<FewShotExample> make_examples() {
  std::vector<FewShotExample> out;

  {
    FewShotExample e;
    e.title = "inclusive lower bound";
    e.table = single_input_table("Shipping", "Order Total", ValueType::number, "Shipping",
                                 {{">= 100", "\"Free\""}, {"-", "\"Standard\""}});
    e.context.bind("Order Total", Decimal(100));
    e.input_description = "The order total is exactly 100.";
    e.expected_reasoning = "Row 1 requires Order Total >= 100. 100 >= 100 holds because >= includes the bound, so row 1 matches first.";
    e.expected_answer = "Free";
    e.expected_row = 1;
    out.push_back(std::move(e));
  }
  {
    FewShotExample e;
    e.title = "half-open interval, closed side";
    e.table = single_input_table("Fee", "Balance", ValueType::number, "Fee",
                                 {{"< 50", "\"Full\""}, {"[50..100)", "\"Reduced\""}, {">= 100", "\"None\""}});
    e.context.bind("Balance", Decimal(50));
    e.input_description = "The balance is 50.";
    e.expected_reasoning = "Row 1 requires Balance < 50, and 50 < 50 is false. Row 2 is [50..100): the square bracket includes 50, so row 2 matches.";
    e.expected_answer = "Reduced";
    e.expected_row = 2;
    out.push_back(std::move(e));
  }
  {
    FewShotExample e;
    e.title = "half-open interval, open side";
    e.table = single_input_table("Fee", "Balance", ValueType::number, "Fee",
                                 {{"< 50", "\"Full\""}, {"[50..100)", "\"Reduced\""}, {">= 100", "\"None\""}});
    e.context.bind("Balance", Decimal::parse("99.99"));
    e.input_description = "The balance is 99.99.";
    e.expected_reasoning = "Row 2 is [50..100): 99.99 is at least 50 and below 100, so row 2 matches. The round bracket only excludes 100 itself.";
    e.expected_answer = "Reduced";
    e.expected_row = 2;
    out.push_back(std::move(e));
  }
  {
    FewShotExample e;
    e.title = "exact text match";
    e.table = single_input_table("Service Level", "Membership", ValueType::text, "Service Level",
                                 {{"\"Gold\",\"Platinum\"", "\"Priority\""}, {"-", "\"Regular\""}});
    e.context.bind("Membership", std::string("gold"));
    e.input_description = "The customer's membership is written as \"gold\".";
    e.expected_reasoning = "Row 1 accepts only the exact texts \"Gold\" or \"Platinum\". \"gold\" differs in case, so row 1 does not match. Row 2 has \"-\" and matches any value.";
    e.expected_answer = "Regular";
    e.expected_row = 2;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

const std::vector<FewShotExample>& builtin_few_shot_examples() {
  static const std::vector<FewShotExample> examples = make_examples();
  return examples;
}

std::vector<std::string> verify_few_shot_examples(const std::vector<FewShotExample>& examples) {
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& e = examples[i];
    const std::string label = "example " + std::to_string(i + 1) + " (" + e.title + ")";
    try {
      auto result = feel::eval_decision_table(e.table, e.context);
      if (result.matched_rule_index != e.expected_row) {
        problems.push_back(label + ": states row " + std::to_string(e.expected_row) + " but row " +
                           std::to_string(result.matched_rule_index) + " matches");
      }
      if (result.output.to_display() != e.expected_answer) {
        problems.push_back(label + ": states answer '" + e.expected_answer + "' but the table yields '" +
                           result.output.to_display() + "'");
      }
    } catch (const feel::FeelError& err) {
      problems.push_back(label + ": " + err.what());
    }
  }
  return problems;
}

}  // namespace dmnprompt::prompt
