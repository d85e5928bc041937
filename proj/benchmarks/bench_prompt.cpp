#include <benchmark/benchmark.h>

#include "dmnprompt/dmn.hpp"
#include "dmnprompt/pipeline.hpp"
#include "dmnprompt/prompt.hpp"

using namespace dmnprompt;

namespace {

const dmn::DecisionModel& nine_rules() {
  static const auto model = dmn::load_dmn_file(DMNPROMPT_FIXTURES "/dmn/bpr_nine_rules.dmn").model;
  return model;
}

const std::string kInput =
    "Applications are split into simple and complex cases at intake. The two credit checks are merged into one "
    "task. Fraud detection runs after the manual evaluation.";

}  // namespace

static void BM_BuildDmnGuided(benchmark::State& state) {
  const prompt::PromptBuilder builder;
  prompt::PromptOptions options;
  options.render_style = state.range(0) == 0 ? dmn::RenderStyle::compact_text : dmn::RenderStyle::raw_xml;
  for (auto _ : state) {
    benchmark::DoNotOptimize(builder.build(prompt::PromptVariant::dmn_guided, nine_rules(), kInput, options));
  }
}
BENCHMARK(BM_BuildDmnGuided)->Arg(0)->Arg(1)->ArgName("raw_xml");

static void BM_BuildCot(benchmark::State& state) {
  const prompt::PromptBuilder builder;
  for (auto _ : state) {
    benchmark::DoNotOptimize(builder.build(prompt::PromptVariant::cot_baseline, nine_rules(), kInput, {}));
  }
}
BENCHMARK(BM_BuildCot);

static void BM_ParseDmn(benchmark::State& state) {
  const auto text = dmn::render_canonical(nine_rules(), dmn::RenderStyle::raw_xml);
  for (auto _ : state) benchmark::DoNotOptimize(dmn::parse_dmn(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseDmn);

static void BM_ParseResponse(benchmark::State& state) {
  std::vector<std::pair<std::string, std::string>> messages;
  std::vector<std::string> names;
  for (const auto& t : dmn::extract_triples(nine_rules())) {
    names.push_back(t.rule_name);
    messages.emplace_back(t.rule_name, "The rule is applied correctly in this submission.");
  }
  const auto raw = pipeline::format_envelope(messages);
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::parse_llm_output(raw, names));
}
BENCHMARK(BM_ParseResponse);
