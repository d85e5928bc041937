#include <gtest/gtest.h>

#include <filesystem>

#include "dmnprompt/engine.hpp"
#include "dmnprompt/prompt.hpp"
#include "test_support.hpp"

using namespace dmnprompt;
using namespace dmnprompt::prompt;
using testsupport::fixture;

namespace {

dmn::DecisionModel load(const std::string& name) { return dmn::load_dmn_file(fixture("dmn/" + name)).model; }

const std::string kApplicant = "Applicant earns 60000 with credit score 720.";

std::size_t occurrences(const std::string& hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(PartA, ContainsModelAndInputVerbatim) {
  PromptBuilder b;
  const auto a = b.build_part_a(load("loan.dmn"), kApplicant, {});
  EXPECT_NE(a.find("Loan Approval Rule"), std::string::npos);
  EXPECT_NE(a.find("> 50000"), std::string::npos);
  EXPECT_NE(a.find(kApplicant), std::string::npos);
  EXPECT_NE(a.find("Template version: " + TemplateSet::builtin().version), std::string::npos);
  EXPECT_TRUE(testsupport::matches_golden("part_a_loan_compact.txt", a));
}

TEST(PartA, RawXmlStyle) {
  PromptBuilder b;
  PromptOptions o;
  o.render_style = dmn::RenderStyle::raw_xml;
  const auto a = b.build_part_a(load("loan.dmn"), kApplicant, o);
  EXPECT_NE(a.find("<decisionTable"), std::string::npos);
  EXPECT_NE(a.find(dmn::render_canonical(load("loan.dmn"), dmn::RenderStyle::raw_xml)), std::string::npos);
  EXPECT_TRUE(testsupport::matches_golden("part_a_loan_raw_xml.txt", a));
}

TEST(PartA, PreambleOptions) {
  PromptBuilder b;
  PromptOptions empty;
  empty.custom_preamble = "";
  EXPECT_EQ(b.build_part_a(load("loan.dmn"), kApplicant, empty), b.build_part_a(load("loan.dmn"), kApplicant, {}));
  PromptOptions custom;
  custom.custom_preamble = "Grade this exam answer.";
  const auto a = b.build_part_a(load("loan.dmn"), kApplicant, custom);
  EXPECT_NE(a.find("Grade this exam answer."), std::string::npos);
  EXPECT_EQ(a.find(TemplateSet::builtin().part_a_preamble), std::string::npos);
}

TEST(PartA, EmptyInputRejected) {
  PromptBuilder b;
  EXPECT_THROW((void)b.build_part_a(load("loan.dmn"), "", {}), std::invalid_argument);
}

TEST(PartB, NamesTheFourComponents) {
  PromptBuilder b;
  const auto part = b.build_part_b();
  for (const char* c : {"rule name", "list of input elements", "decision table", "literal expression"}) {
    EXPECT_NE(part.find(c), std::string::npos) << c;
  }
  EXPECT_NE(part.find("annotation"), std::string::npos);
  EXPECT_EQ(part, b.build_part_b());
  EXPECT_TRUE(testsupport::matches_golden("part_b.txt", part));
}

TEST(PartC, StepsAndWorkedExamples) {
  PromptBuilder b;
  const auto with = b.build_part_c({});
  const auto c1 = with.find("C1.");
  const auto c2 = with.find("C2.");
  const auto c3 = with.find("C3.");
  const auto c4 = with.find("C4.");
  ASSERT_NE(c4, std::string::npos);
  EXPECT_TRUE(c1 < c2 && c2 < c3 && c3 < c4);
  EXPECT_GE(occurrences(with, "Example "), 2u);
  EXPECT_NE(with.find(">= 100"), std::string::npos);
  EXPECT_NE(with.find("intermediate data structures"), std::string::npos);
  EXPECT_EQ(with.find(kFewShotMarker), std::string::npos);
  EXPECT_EQ(with, b.build_part_c({}));
  EXPECT_TRUE(testsupport::matches_golden("part_c.txt", with));

  PromptOptions off;
  off.include_few_shot = false;
  const auto without = b.build_part_c(off);
  EXPECT_EQ(occurrences(without, "Example "), 0u);
  EXPECT_NE(without.find("C4."), std::string::npos);
  EXPECT_EQ(without.find(kFewShotMarker), std::string::npos);
}

TEST(PartC, ClosedBoundaryExampleIsPresent) {
  bool closed_boundary = false;
  for (const auto& ex : builtin_few_shot_examples()) {
    for (std::size_t c = 0; c < ex.table.input_clauses.size(); ++c) {
      const auto* v = ex.context.find(ex.table.input_clauses[c].expression);
      if (v == nullptr || !v->is_number()) continue;
      for (const auto& rule : ex.table.rules) {
        const auto& cell = rule.input_entries[c];
        if (cell.rfind(">=", 0) == 0 && feel::parse_literal(cell.substr(2)) == *v) closed_boundary = true;
      }
    }
  }
  EXPECT_TRUE(closed_boundary);
}

TEST(PartC, WorkedExamplesAgreeWithEngine) {
  EXPECT_TRUE(verify_few_shot_examples(builtin_few_shot_examples()).empty());
  for (const auto& ex : builtin_few_shot_examples()) {
    auto r = feel::eval_decision_table(ex.table, ex.context);
    EXPECT_EQ(r.matched_rule_index, ex.expected_row) << ex.title;
    EXPECT_EQ(r.output.to_display(), ex.expected_answer) << ex.title;
  }
}

TEST(PartC, SelfCheckCatchesWrongExample) {
  auto examples = builtin_few_shot_examples();
  examples[0].expected_answer = "Something else";
  EXPECT_EQ(verify_few_shot_examples(examples).size(), 1u);
  examples = builtin_few_shot_examples();
  examples[1].expected_row += 1;
  EXPECT_EQ(verify_few_shot_examples(examples).size(), 1u);
}

TEST(PartD, EnvelopeAndDeterminism) {
  PromptBuilder b;
  const auto d = b.build_part_d();
  EXPECT_NE(d.find("<<RULE:"), std::string::npos);
  EXPECT_NE(d.find("<<END>>"), std::string::npos);
  EXPECT_EQ(d, b.build_part_d());
  EXPECT_TRUE(testsupport::matches_golden("part_d.txt", d));
}

TEST(Assembly, SeparationAcrossModels) {
  PromptBuilder b;
  const std::vector<std::string> files = {"loan.dmn", "bpr_nine_rules.dmn", "shipping_dmn12.dmn", "untyped.dmn"};
  std::vector<PromptBundle> bundles;
  for (const auto& f : files) bundles.push_back(b.build_dmn_guided(load(f), kApplicant, {}));
  for (std::size_t i = 1; i < bundles.size(); ++i) {
    EXPECT_EQ(bundles[i].part_b, bundles[0].part_b);
    EXPECT_EQ(bundles[i].part_c, bundles[0].part_c);
    EXPECT_EQ(bundles[i].part_d, bundles[0].part_d);
    EXPECT_NE(bundles[i].part_a, bundles[0].part_a);
  }
}

TEST(Assembly, ExactlyOneSequenceAndSplits) {
  PromptBuilder b;
  const auto bundle = b.build_dmn_guided(load("loan.dmn"), kApplicant, {});
  for (auto h : kPartHeaders) EXPECT_EQ(occurrences(bundle.assembled, h), 1u) << h;
  auto parts = split_assembled(bundle.assembled);
  ASSERT_TRUE(parts.has_value());
  EXPECT_EQ((*parts)[0], bundle.part_a);
  EXPECT_EQ((*parts)[1], bundle.part_b);
  EXPECT_EQ((*parts)[2], bundle.part_c);
  EXPECT_EQ((*parts)[3], bundle.part_d);
  EXPECT_EQ(bundle.assembled, b.build_dmn_guided(load("loan.dmn"), kApplicant, {}).assembled);
  EXPECT_EQ(bundle.few_shot_examples.size(), builtin_few_shot_examples().size());
  EXPECT_EQ(bundle.template_version, TemplateSet::builtin().version);
  EXPECT_TRUE(testsupport::matches_golden("prompt_loan_dmn_guided.txt", bundle.assembled));
}

TEST(Assembly, SplitsEvenWhenInputMentionsHeaders) {
  PromptBuilder b;
  const std::string sneaky = "My text says === PART B === and more";
  const auto bundle = b.build_dmn_guided(load("loan.dmn"), sneaky, {});
  auto parts = split_assembled(bundle.assembled);
  ASSERT_TRUE(parts.has_value());
  EXPECT_EQ((*parts)[0], bundle.part_a);
  EXPECT_FALSE(split_assembled("no headers").has_value());
}

TEST(CotBaseline, SharesPartAAndDropsSteps) {
  PromptBuilder b;
  const auto guided = b.build_dmn_guided(load("loan.dmn"), kApplicant, {});
  const auto cot = b.build_cot_baseline(load("loan.dmn"), kApplicant, {});
  EXPECT_EQ(cot.variant, PromptVariant::cot_baseline);
  EXPECT_EQ(cot.part_a, guided.part_a);
  EXPECT_EQ(cot.assembled.rfind(guided.part_a, 0), 0u);
  for (const char* h : {"C1.", "C2.", "C3.", "C4."}) EXPECT_EQ(cot.assembled.find(h), std::string::npos);
  for (auto h : kPartHeaders) EXPECT_EQ(cot.assembled.find(h), std::string::npos);
  EXPECT_NE(cot.assembled.find("step by step"), std::string::npos);
  EXPECT_EQ(cot.assembled, b.build_cot_baseline(load("loan.dmn"), kApplicant, {}).assembled);
  EXPECT_TRUE(testsupport::matches_golden("prompt_loan_cot.txt", cot.assembled));
}

TEST(Templates, DirectoryOverride) {
  const auto dir = testsupport::temp_dir("templates");
  write_file_atomic((dir / "VERSION").string(), "9.9-test\n");
  write_file_atomic((dir / "part_d.txt").string(), "Answer with <<RULE: name>> message <<END>> blocks only.\n");
  const auto set = TemplateSet::load_directory(dir.string());
  EXPECT_EQ(set.version, "9.9-test");
  EXPECT_EQ(set.part_b, TemplateSet::builtin().part_b);
  EXPECT_NE(set.part_d, TemplateSet::builtin().part_d);
  PromptBuilder b(set);
  EXPECT_NE(b.build_dmn_guided(load("loan.dmn"), kApplicant, {}).assembled.find("Template version: 9.9-test"),
            std::string::npos);

  write_file_atomic((dir / "part_b.txt").string(), "=== PART C ===\n");
  EXPECT_THROW((void)TemplateSet::load_directory(dir.string()), std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST(Templates, VariantNames) {
  EXPECT_EQ(variant_from_string("dmn"), PromptVariant::dmn_guided);
  EXPECT_EQ(variant_from_string("cot_baseline"), PromptVariant::cot_baseline);
  EXPECT_FALSE(variant_from_string("zero-shot").has_value());
}
