#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dmnprompt/pipeline.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace dmnprompt;
using namespace dmnprompt::pipeline;
using testsupport::fixture;

namespace {

dmn::DecisionModel load(const std::string& name) { return dmn::load_dmn_file(fixture("dmn/" + name)).model; }

llm::BackendConfig replay_config(const std::string& transcript) {
  llm::BackendConfig c;
  c.kind = llm::BackendKind::replay;
  c.model_name = "fixture-model";
  c.transcript_path = transcript;
  return c;
}

/// Gateway over an in-memory store filled with the given prompt/response pairs.
struct MemoryReplay {
  std::shared_ptr<llm::TranscriptStore> store = std::make_shared<llm::TranscriptStore>();
  std::unique_ptr<llm::Gateway> gateway;

  MemoryReplay() {
    llm::Gateway::Options o;
    o.transcript = store;
    gateway = std::make_unique<llm::Gateway>(replay_config("memory"), o);
  }
  void add(const std::string& prompt, const std::string& response) {
    store->record({llm::fingerprint(prompt, "fixture-model", Decimal(0)), llm::BackendKind::replay, "fixture-model",
                   prompt, response, "2025-01-01T00:00:00Z", {}, {}});
  }
};

const std::vector<std::string> kLoanRule = {"Loan Approval"};

}  // namespace

TEST(Envelope, WellFormed) {
  auto out = parse_llm_output("<<RULE: Loan Approval>> Loan approved. <<END>>", kLoanRule);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], (OutcomeEntry{"Loan Approval", "Loan approved.", ParseStatus::ok}));
}

TEST(Envelope, EmptyAndNoBlocks) {
  EXPECT_EQ(parse_llm_output("", kLoanRule)[0].parse_status, ParseStatus::missing);
  EXPECT_EQ(parse_llm_output("  \n", kLoanRule)[0].parse_status, ParseStatus::missing);
  EXPECT_EQ(parse_llm_output("The loan is approved.", kLoanRule)[0].parse_status, ParseStatus::malformed);
}

TEST(Envelope, UnknownNamesIgnored) {
  auto out = parse_llm_output("<<RULE: Something Else>> hi <<END>>", kLoanRule);
  EXPECT_EQ(out[0].parse_status, ParseStatus::missing);
}

TEST(Envelope, ToleratesProseAndNameVariation) {
  auto out = parse_llm_output("Sure! Here you go:\n<<RULE:   loan   APPROVAL >>\n Loan rejected.\n<<END>>\nThanks.",
                              kLoanRule);
  EXPECT_EQ(out[0], (OutcomeEntry{"Loan Approval", "Loan rejected.", ParseStatus::ok}));
}

TEST(Envelope, DuplicatesKeepFirstAndFlag) {
  auto out = parse_llm_output("<<RULE: Loan Approval>> first <<END>> <<RULE: Loan Approval>> second <<END>>", kLoanRule);
  EXPECT_EQ(out[0].message, "first");
  EXPECT_EQ(out[0].parse_status, ParseStatus::malformed);
}

TEST(Envelope, UnterminatedBlock) {
  auto out = parse_llm_output("<<RULE: A>> one <<RULE: B>> two <<END>>", std::vector<std::string>{"A", "B"});
  EXPECT_EQ(out[0], (OutcomeEntry{"A", "one", ParseStatus::malformed}));
  EXPECT_EQ(out[1], (OutcomeEntry{"B", "two", ParseStatus::ok}));
}

TEST(Envelope, FormatInvertsParse) {
  std::vector<std::pair<std::string, std::string>> messages = {{"Rule 1: Triage", "Fine."}, {"Other", "Also <fine>."}};
  auto out = parse_llm_output(format_envelope(messages), std::vector<std::string>{"Rule 1: Triage", "Other"});
  for (std::size_t i = 0; i < messages.size(); ++i) {
    EXPECT_EQ(out[i], (OutcomeEntry{messages[i].first, messages[i].second, ParseStatus::ok}));
  }
}

TEST(Envelope, RandomNoiseIsHandled) {
  std::mt19937 rng(3);
  const std::vector<std::string> pieces = {"<<RULE:", ">>", "<<END>>", "Loan Approval", " ", "x", "\n", "<<", "\0"};
  for (int i = 0; i < 5000; ++i) {
    std::string raw;
    const int n = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int k = 0; k < n; ++k) raw += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
    auto out = parse_llm_output(raw, std::vector<std::string>{"Loan Approval", "Other"});
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].rule_name, "Loan Approval");
    EXPECT_EQ(out[1].rule_name, "Other");
    if (out[0].parse_status == ParseStatus::missing) {
      EXPECT_TRUE(out[0].message.empty());
    }
  }
}

TEST(RunCase, WellFormedReplayAgreesWithOracle) {
  const auto model = load("loan.dmn");
  MemoryReplay r;
  CaseInput in{"c1", "Applicant earns 60000 with credit score 720.",
               EvaluationContext{{"Salary", Value::number(60000)}, {"Credit Score", Value::number(720)}}};
  RunOptions opts;
  auto prompts = prompts_for_case(model, in, opts);
  ASSERT_EQ(prompts.size(), 1u);
  r.add(prompts[0], "<<RULE: Loan Approval>> Loan approved. <<END>>");
  auto result = run_case(model, in, opts, *r.gateway);
  ASSERT_EQ(result.outcomes.size(), 1u);
  EXPECT_EQ(result.outcomes[0].parse_status, ParseStatus::ok);
  ASSERT_TRUE(result.agreement.has_value());
  EXPECT_EQ(*result.agreement, std::vector<bool>{true});
  EXPECT_EQ(result.oracle_outcomes->at(0).message, "Loan approved.");
}

TEST(RunCase, MissingEnvelopeIsMalformedAndRawKept) {
  const auto model = load("loan.dmn");
  MemoryReplay r;
  CaseInput in{"c1", "Applicant earns 40000.", std::nullopt};
  auto prompts = prompts_for_case(model, in, {});
  r.add(prompts[0], "I think the loan is rejected.");
  auto result = run_case(model, in, {}, *r.gateway);
  EXPECT_EQ(result.raw_response, "I think the loan is rejected.");
  EXPECT_EQ(result.outcomes[0].parse_status, ParseStatus::malformed);
  EXPECT_FALSE(result.agreement.has_value());
  EXPECT_FALSE(result.oracle_outcomes.has_value());
}

TEST(RunCase, DisagreementIsReportedNotCorrected) {
  const auto model = load("loan.dmn");
  MemoryReplay r;
  CaseInput in{"c1", "Applicant earns 50000 with credit score 800.",
               EvaluationContext{{"Salary", Value::number(50000)}, {"Credit Score", Value::number(800)}}};
  r.add(prompts_for_case(model, in, {})[0], "<<RULE: Loan Approval>> Loan approved. <<END>>");
  auto result = run_case(model, in, {}, *r.gateway);
  EXPECT_EQ(result.outcomes[0].message, "Loan approved.");
  EXPECT_EQ(*result.agreement, std::vector<bool>{false});
}

TEST(RunCase, PerRuleCallsSendOnePromptPerTriple) {
  const auto model = load("shipping_dmn12.dmn");
  MemoryReplay r;
  CaseInput in{"c1", "Order of 120 by a Gold member.", std::nullopt};
  RunOptions opts;
  opts.per_rule_calls = true;
  auto prompts = prompts_for_case(model, in, opts);
  ASSERT_EQ(prompts.size(), 2u);
  EXPECT_NE(prompts[0], prompts[1]);
  EXPECT_EQ(prompts[0].find("Member Discount"), std::string::npos);
  r.add(prompts[0], "<<RULE: Free Shipping>> Shipping is free. <<END>>");
  r.add(prompts[1], "<<RULE: Member Discount>> A member discount applies. <<END>>");
  auto result = run_case(model, in, opts, *r.gateway);
  ASSERT_EQ(result.outcomes.size(), 2u);
  EXPECT_EQ(result.outcomes[0].parse_status, ParseStatus::ok);
  EXPECT_EQ(result.outcomes[1].parse_status, ParseStatus::ok);
}

TEST(RunBatch, EmptyInput) {
  MemoryReplay r;
  auto batch = run_batch(load("loan.dmn"), {}, {}, *r.gateway);
  EXPECT_TRUE(batch.results.empty());
  EXPECT_EQ(batch.manifest.case_count, 0u);
  EXPECT_FALSE(batch.manifest.model_hash.empty());
}

TEST(RunBatch, OrderPreservedAndMissIsolated) {
  const auto model = load("loan.dmn");
  MemoryReplay r;
  std::vector<CaseInput> cases;
  for (int i = 0; i < 40; ++i) {
    CaseInput in{"case" + std::to_string(i), "Applicant " + std::to_string(i), std::nullopt};
    if (i != 17) r.add(prompts_for_case(model, in, {})[0], "<<RULE: Loan Approval>> m" + std::to_string(i) + " <<END>>");
    cases.push_back(in);
  }
  for (int parallelism : {1, 3, 8}) {
    RunOptions opts;
    opts.parallelism = parallelism;
    auto batch = run_batch(model, cases, opts, *r.gateway);
    ASSERT_EQ(batch.results.size(), cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
      EXPECT_EQ(batch.results[i].case_id, cases[i].case_id);
      if (i == 17) {
        ASSERT_TRUE(batch.results[i].error.has_value());
        EXPECT_EQ(batch.results[i].error->kind, "ReplayMiss");
      } else {
        EXPECT_FALSE(batch.results[i].error.has_value());
        EXPECT_EQ(batch.results[i].outcomes[0].message, "m" + std::to_string(i));
      }
    }
    EXPECT_EQ(batch.manifest.error_count, 1u);
  }
}

TEST(RunBatch, DuplicateIdsRejected) {
  MemoryReplay r;
  std::vector<CaseInput> cases = {{"a", "x", std::nullopt}, {"a", "y", std::nullopt}};
  EXPECT_THROW((void)run_batch(load("loan.dmn"), cases, {}, *r.gateway), std::invalid_argument);
}

TEST(RunBatch, ShippedFixtureAgreesWhereResponsesComeFromTheOracle) {
  const auto model = load("bpr_nine_rules.dmn");
  const auto cases = load_cases(fixture("run/cases.jsonl"));
  auto raw = read_file(fixture("run/cases.jsonl"));
  llm::Gateway gateway(replay_config(fixture("run/transcript.jsonl")));
  auto batch = run_batch(model, cases, {}, gateway);
  ASSERT_EQ(batch.results.size(), 10u);
  std::size_t line_no = 0;
  std::istringstream lines(raw);
  for (std::string line; std::getline(lines, line); ++line_no) {
    const bool overridden = nlohmann::json::parse(line).contains("fixture_response");
    const auto& r = batch.results[line_no];
    ASSERT_FALSE(r.error.has_value()) << r.case_id;
    ASSERT_TRUE(r.agreement.has_value());
    const bool all = std::all_of(r.agreement->begin(), r.agreement->end(), [](bool b) { return b; });
    EXPECT_EQ(all, !overridden) << r.case_id;
  }
  EXPECT_EQ(gateway.live_calls(), 0u);
}

TEST(Json, ContextParsing) {
  auto ctx = parse_context_json(R"({"Salary": 60000, "Name": "Ann", "Ok": true, "Rate": 0.1})");
  EXPECT_EQ(*ctx.find("Salary"), Value::number(60000));
  EXPECT_EQ(*ctx.find("Name"), Value("Ann"));
  EXPECT_EQ(*ctx.find("Ok"), Value(true));
  EXPECT_EQ(ctx.find("Rate")->as_number().to_string(), "0.1");
  EXPECT_THROW((void)parse_context_json("[1]"), std::invalid_argument);
  EXPECT_THROW((void)parse_context_json(R"({"a": null})"), std::invalid_argument);
  EXPECT_THROW((void)parse_context_json(R"({"a": [1]})"), std::invalid_argument);
  EXPECT_THROW((void)parse_context_json("{"), std::invalid_argument);
}

TEST(Json, CasesFileErrorsNameTheLine) {
  try {
    (void)parse_cases_jsonl("{\"case_id\":\"a\",\"input_text\":\"x\"}\n{\"case_id\":\"b\"}\n", "cases.jsonl");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW((void)parse_cases_jsonl("not json\n"), FormatError);
  EXPECT_EQ(parse_cases_jsonl("\n\n").size(), 0u);
}

TEST(Json, ResultsRoundTrip) {
  const auto model = load("loan.dmn");
  MemoryReplay r;
  CaseInput in{"c1", "text", EvaluationContext{{"Salary", Value::number(60000)}, {"Credit Score", Value::number(720)}}};
  r.add(prompts_for_case(model, in, {})[0], "<<RULE: Loan Approval>> Loan approved. <<END>>");
  auto result = run_case(model, in, {}, *r.gateway);
  CaseResult failed;
  failed.case_id = "c2";
  failed.variant = prompt::PromptVariant::cot_baseline;
  failed.error = CaseError{"ReplayMiss", "no record"};
  const std::string text = to_jsonl_line(result) + "\n" + to_jsonl_line(failed) + "\n";
  auto back = parse_results_jsonl(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].outcomes, result.outcomes);
  EXPECT_EQ(back[0].oracle_outcomes, result.oracle_outcomes);
  EXPECT_EQ(back[0].agreement, result.agreement);
  EXPECT_EQ(back[1].error, failed.error);
  EXPECT_EQ(back[1].variant, prompt::PromptVariant::cot_baseline);
  EXPECT_EQ(to_jsonl_line(back[0]), to_jsonl_line(result));
}

TEST(Json, ManifestRedactsKey) {
  RunManifest m;
  m.backend.api_key_env_var = "OPENAI_API_KEY";
  m.template_version = "1.0";
  auto j = nlohmann::json::parse(manifest_to_json(m));
  EXPECT_EQ(j["backend"]["api_key"], "<redacted>");
  EXPECT_EQ(j["backend"]["api_key_env_var"], "OPENAI_API_KEY");
  EXPECT_EQ(j["template_version"], "1.0");
}
