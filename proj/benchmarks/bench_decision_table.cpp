#include <benchmark/benchmark.h>

#include "dmnprompt/dmn.hpp"
#include "dmnprompt/engine.hpp"

using namespace dmnprompt;

namespace {

const dmn::DecisionModel& nine_rules() {
  static const auto model = dmn::load_dmn_file(DMNPROMPT_FIXTURES "/dmn/bpr_nine_rules.dmn").model;
  return model;
}

EvaluationContext submission() {
  return {{"Triage Applied", Value(true)},
          {"Merged Credit Check", Value(false)},
          {"Credit Check Position", Value::number(3)},
          {"Automated Tasks", Value::number(1)},
          {"Fraud Check Position", Value("late")},
          {"Waiting Construct", Value("deferred choice")},
          {"Parallel Web Services", Value(true)},
          {"Redundant Checks", Value::number(2)},
          {"Fraud Investigator Assigned", Value(true)}};
}

// A table with `rows` interval rows; the input hits the last one.
dmn::DecisionTable wide_table(int rows) {
  dmn::DecisionTable t;
  t.name = "Bands";
  t.input_clauses.push_back({"x", "x", ValueType::number});
  t.output_clauses.push_back({"band", ValueType::number});
  for (int r = 0; r < rows; ++r) {
    dmn::TableRule rule;
    rule.input_entries.push_back("[" + std::to_string(r * 10) + ".." + std::to_string(r * 10 + 10) + ")");
    rule.output_entries.push_back(std::to_string(r));
    t.rules.push_back(rule);
  }
  return t;
}

}  // namespace

static void BM_EvalDecisionTable(benchmark::State& state) {
  const auto t = wide_table(static_cast<int>(state.range(0)));
  const EvaluationContext ctx{{"x", Value::number(state.range(0) * 10 - 5)}};
  for (auto _ : state) benchmark::DoNotOptimize(feel::eval_decision_table(t, ctx));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvalDecisionTable)->RangeMultiplier(4)->Range(4, 256)->Complexity();

static void BM_CompiledTable(benchmark::State& state) {
  const auto t = wide_table(static_cast<int>(state.range(0)));
  const feel::CompiledTable compiled(t);
  const EvaluationContext ctx{{"x", Value::number(state.range(0) * 10 - 5)}};
  for (auto _ : state) benchmark::DoNotOptimize(compiled.evaluate(ctx));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CompiledTable)->RangeMultiplier(4)->Range(4, 256)->Complexity();

static void BM_EvaluateModel(benchmark::State& state) {
  const auto& model = nine_rules();
  const auto ctx = submission();
  for (auto _ : state) benchmark::DoNotOptimize(feel::evaluate_model(model, ctx));
}
BENCHMARK(BM_EvaluateModel);
