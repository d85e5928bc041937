#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dmnprompt/eval.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace dmnprompt;
using namespace dmnprompt::eval;

namespace {

EvalErrorKind error_of(auto&& fn) {
  try {
    fn();
  } catch (const EvalError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no EvalError";
  return EvalErrorKind::empty_input;
}

std::vector<LabelRecord> records_for(const ConfusionCounts& c) {
  std::vector<LabelRecord> out;
  auto add = [&](std::uint64_t n, bool gold, bool pred) {
    for (std::uint64_t i = 0; i < n; ++i) {
      out.push_back({"case" + std::to_string(out.size()), "R", gold, pred, std::nullopt});
    }
  };
  add(c.tp, true, true);
  add(c.fp, false, true);
  add(c.fn, true, false);
  add(c.tn, false, false);
  return out;
}

struct Row {
  ConfusionCounts counts;
  const char* precision;
  const char* recall;
  const char* f1;
  const char* accuracy;
};

}  // namespace

TEST(Labels, ParseAndErrors) {
  EXPECT_TRUE(parse_labels_jsonl("").empty());
  const std::string three =
      R"({"case_id":"a","rule":"R1","gold_violation":true,"predicted_violation":true,"feedback_correct":true})"
      "\n"
      R"({"case_id":"a","rule":"R2","gold_violation":false,"predicted_violation":true})"
      "\n"
      R"({"case_id":"b","rule":"R1","gold_violation":false,"predicted_violation":false,"feedback_correct":null})"
      "\n";
  auto recs = parse_labels_jsonl(three);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].feedback_correct, true);
  EXPECT_FALSE(recs[1].feedback_correct.has_value());
  EXPECT_EQ(parse_labels_jsonl(to_jsonl_line(recs[1]) + "\n")[0], recs[1]);

  try {
    (void)parse_labels_jsonl(three + R"({"case_id":"c","rule":"R1","gold_violation":"yes","predicted_violation":false})");
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.kind(), EvalErrorKind::schema_error);
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_EQ(error_of([&] { (void)parse_labels_jsonl(three + three); }), EvalErrorKind::duplicate_key);
  EXPECT_EQ(error_of([] { (void)parse_labels_jsonl("{broken"); }), EvalErrorKind::schema_error);
  EXPECT_EQ(error_of([] { (void)parse_labels_jsonl(R"({"case_id":"a","rule":"R"})"); }), EvalErrorKind::schema_error);
  EXPECT_THROW((void)load_labels(testsupport::fixture("run/absent.jsonl")), IoError);
  EXPECT_EQ(load_labels(testsupport::fixture("run/labels.jsonl")).size(), 74u);
}

TEST(Confusion, Cells) {
  std::vector<LabelRecord> all_true;
  for (int i = 0; i < 5; ++i) all_true.push_back({std::to_string(i), "R", true, true, std::nullopt});
  EXPECT_EQ(confusion(all_true), (ConfusionCounts{5, 0, 0, 0}));

  std::vector<LabelRecord> over_flagging;
  for (int i = 0; i < 10; ++i) over_flagging.push_back({std::to_string(i), "R", i < 4, true, std::nullopt});
  const auto c = confusion(over_flagging);
  EXPECT_EQ(c, (ConfusionCounts{4, 6, 0, 0}));
  EXPECT_EQ(metrics(c).recall, (Ratio{4, 4}));

  std::vector<LabelRecord> one_each = {{"a", "R", true, true, {}}, {"b", "R", false, true, {}},
                                       {"c", "R", true, false, {}}, {"d", "R", false, false, {}}};
  EXPECT_EQ(confusion(one_each), (ConfusionCounts{1, 1, 1, 1}));
  EXPECT_EQ(error_of([] { (void)confusion({}); }), EvalErrorKind::empty_input);
}

TEST(Metrics, DirectArithmetic) {
  const auto m = metrics({2, 1, 0, 3});
  EXPECT_NEAR(m.precision->value(), 2.0 / 3.0, 1e-12);
  EXPECT_EQ(m.recall->value(), 1.0);
  EXPECT_NEAR(m.f1->value(), 0.8, 1e-12);
  EXPECT_NEAR(m.accuracy.value(), 5.0 / 6.0, 1e-12);
  EXPECT_EQ(format_half_up(*m.precision, 3), "0.667");
  EXPECT_EQ(format_half_up(m.accuracy, 3), "0.833");
}

TEST(Metrics, DegenerateCells) {
  const auto m = metrics({0, 0, 3, 2});
  EXPECT_FALSE(m.precision.has_value());
  EXPECT_FALSE(m.f1.has_value());
  EXPECT_EQ(m.recall, (Ratio{0, 3}));
  const auto n = metrics({0, 0, 0, 4});
  EXPECT_FALSE(n.recall.has_value());
  EXPECT_EQ(n.accuracy.value(), 1.0);
  const auto z = metrics({0, 2, 3, 1});
  ASSERT_TRUE(z.f1.has_value());
  EXPECT_EQ(z.f1->value(), 0.0);
  EXPECT_THROW((void)metrics({0, 0, 0, 0}), std::invalid_argument);
}

TEST(Metrics, MatchesIndependentRecomputation) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint64_t> cell(0, 60);
  for (int i = 0; i < 200; ++i) {
    ConfusionCounts c{cell(rng), cell(rng), cell(rng), cell(rng)};
    if (i % 7 == 0) c.tp = 0;
    if (i % 11 == 0) c.fp = 0;
    if (c.total() == 0) continue;
    auto recs = records_for(c);
    std::shuffle(recs.begin(), recs.end(), rng);
    ASSERT_EQ(confusion(recs), c);
    const auto m = metrics(confusion(recs));
    const double tp = double(c.tp), fp = double(c.fp), fn = double(c.fn), tn = double(c.tn);
    if (tp + fp == 0) {
      EXPECT_FALSE(m.precision.has_value());
    } else {
      EXPECT_NEAR(m.precision->value(), tp / (tp + fp), 1e-9);
    }
    if (tp + fn == 0) {
      EXPECT_FALSE(m.recall.has_value());
    } else {
      EXPECT_NEAR(m.recall->value(), tp / (tp + fn), 1e-9);
      EXPECT_EQ(m.recall->value() == 1.0, c.fn == 0);
    }
    if (m.precision && m.recall) {
      const double p = tp / (tp + fp), r = tp / (tp + fn);
      ASSERT_TRUE(m.f1.has_value());
      EXPECT_NEAR(m.f1->value(), p + r == 0 ? 0.0 : 2 * p * r / (p + r), 1e-9);
      EXPECT_LE(m.f1->value(), std::max(p, r) + 1e-12);
      EXPECT_EQ(m.f1->value() == 0.0, c.tp == 0);
    } else {
      EXPECT_FALSE(m.f1.has_value());
    }
    EXPECT_NEAR(m.accuracy.value(), (tp + tn) / (tp + fp + fn + tn), 1e-9);
  }
}

TEST(Metrics, ReportedRowsAreReachable) {
  // Smallest confusion matrices whose rounded metrics equal each reported row.
  const std::vector<Row> rows = {{{43, 4, 5, 15}, "0.91", "0.90", "0.91", "0.87"},
                                 {{9, 16, 0, 10}, "0.36", "1.00", "0.53", "0.54"},
                                 {{26, 17, 4, 13}, "0.60", "0.87", "0.71", "0.65"},
                                 {{12, 10, 5, 4}, "0.55", "0.71", "0.62", "0.52"}};
  for (const auto& row : rows) {
    const auto m = metrics(row.counts);
    EXPECT_EQ(format_half_up(*m.precision), row.precision);
    EXPECT_EQ(format_half_up(*m.recall), row.recall);
    EXPECT_EQ(format_half_up(*m.f1), row.f1);
    EXPECT_EQ(format_half_up(m.accuracy), row.accuracy);
  }
}

TEST(Format, HalfUp) {
  EXPECT_EQ(format_half_up({1, 8}), "0.13");  // 0.125
  EXPECT_EQ(format_half_up({3, 8}), "0.38");  // 0.375
  EXPECT_EQ(format_half_up({1, 3}), "0.33");
  EXPECT_EQ(format_half_up({2, 3}), "0.67");
  EXPECT_EQ(format_half_up({1, 1}), "1.00");
  EXPECT_EQ(format_half_up({0, 5}), "0.00");
  EXPECT_EQ(format_half_up({13, 14}, 3), "0.929");
  EXPECT_EQ(format_half_up({1, 2}, 0), "1");
}

TEST(PerRule, AccuracyRows) {
  std::vector<LabelRecord> recs;
  for (int i = 0; i < 14; ++i) recs.push_back({"g" + std::to_string(i), "Rule 3 (knock-out)", false, false, i != 5});
  for (int i = 0; i < 14; ++i) recs.push_back({"g" + std::to_string(i), "Rule 1 (triage)", false, false, true});
  const auto rows = per_rule_report(recs);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].rule_name, "Rule 3 (knock-out)");
  EXPECT_EQ(rows[0].n, 14u);
  EXPECT_EQ(rows[0].correct_feedback_count, 13u);
  EXPECT_EQ(format_half_up(rows[0].accuracy, 3), "0.929");
  EXPECT_EQ(rows[1].accuracy.value(), 1.0);
  EXPECT_EQ(rows[2].rule_name, "overall");
  EXPECT_EQ(rows[2].n, 28u);
  EXPECT_EQ(rows[2].correct_feedback_count, 27u);
  const auto text = render_per_rule_text(rows);
  EXPECT_NE(text.find("92.9%"), std::string::npos);
  EXPECT_NE(text.find("100.0%"), std::string::npos);
  EXPECT_EQ(text.find("Rule 2"), std::string::npos);

  recs.push_back({"x", "Rule 2", true, true, std::nullopt});
  EXPECT_EQ(error_of([&] { (void)per_rule_report(recs); }), EvalErrorKind::missing_feedback_labels);
  EXPECT_EQ(error_of([] { (void)per_rule_report({}); }), EvalErrorKind::empty_input);
}

TEST(Render, TextAndJson) {
  const auto m = metrics({2, 1, 0, 3});
  const auto text = render_metrics_text(m);
  EXPECT_NE(text.find("0.67"), std::string::npos);
  EXPECT_NE(text.find("0.83"), std::string::npos);
  auto j = nlohmann::json::parse(render_metrics_json(m));
  EXPECT_EQ(j["tp"], 2);
  EXPECT_NEAR(j["precision"].get<double>(), 2.0 / 3.0, 1e-12);
  auto degenerate = nlohmann::json::parse(render_metrics_json(metrics({0, 0, 1, 1})));
  EXPECT_TRUE(degenerate["precision"].is_null());
  EXPECT_TRUE(degenerate["f1"].is_null());
  EXPECT_NE(render_metrics_text(metrics({0, 0, 1, 1})).find("precision  null"), std::string::npos);
}

TEST(Render, ShippedLabelsGolden) {
  const auto recs = load_labels(testsupport::fixture("run/labels.jsonl"));
  const auto rows = per_rule_report(recs);
  const auto m = metrics(confusion(recs));
  EXPECT_TRUE(testsupport::matches_golden("metrics.txt", render_metrics_text(m)));
  EXPECT_TRUE(testsupport::matches_golden("metrics.json", render_metrics_json(m, &rows)));
  EXPECT_TRUE(testsupport::matches_golden("per_rule.txt", render_per_rule_text(rows)));
}
