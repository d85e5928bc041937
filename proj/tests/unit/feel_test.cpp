#include <gtest/gtest.h>

#include "dmnprompt/feel.hpp"

using namespace dmnprompt;
using namespace dmnprompt::feel;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const FeelError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no FeelError thrown";
  return ErrorKind::syntax_error;
}

}  // namespace

TEST(UnaryTestParse, ComparisonAndWildcard) {
  auto t = parse_unary_test("> 50000", ValueType::number);
  ASSERT_TRUE(std::holds_alternative<Comparison>(t.node()));
  EXPECT_EQ(std::get<Comparison>(t.node()), (Comparison{CompareOp::greater, Value::number(50000)}));
  EXPECT_TRUE(parse_unary_test("-").is_wildcard());
  EXPECT_TRUE(parse_unary_test("  -  ").is_wildcard());
}

TEST(UnaryTestParse, TextDisjunction) {
  auto t = parse_unary_test("\"Approved\",\"Rejected\"", ValueType::text);
  ASSERT_TRUE(std::holds_alternative<Disjunction>(t.node()));
  const auto& d = std::get<Disjunction>(t.node());
  ASSERT_EQ(d.alternatives.size(), 2u);
  EXPECT_EQ(std::get<Equality>(d.alternatives[0]).operand, Value("Approved"));
  EXPECT_EQ(std::get<Equality>(d.alternatives[1]).operand, Value("Rejected"));
}

TEST(UnaryTestParse, BareLiteralIsEquality) {
  auto t = parse_unary_test("true", ValueType::boolean);
  EXPECT_EQ(std::get<Equality>(t.node()).operand, Value(true));
}

TEST(UnaryTestParse, Intervals) {
  auto closed = parse_unary_test("[50..100]");
  EXPECT_EQ(std::get<Interval>(closed.node()), (Interval{Value::number(50), true, Value::number(100), true}));
  auto half = parse_unary_test("[50..100)");
  EXPECT_FALSE(std::get<Interval>(half.node()).upper_closed);
  auto reversed = parse_unary_test("]50..100[");
  EXPECT_FALSE(std::get<Interval>(reversed.node()).lower_closed);
  EXPECT_FALSE(std::get<Interval>(reversed.node()).upper_closed);
  EXPECT_EQ(kind_of([] { (void)parse_unary_test("[100..50]"); }), ErrorKind::syntax_error);
}

TEST(UnaryTestParse, ThousandsSeparatorVersusDisjunction) {
  auto grouped = parse_unary_test("> 50,000", ValueType::number);
  EXPECT_EQ(std::get<Comparison>(grouped.node()).operand, Value::number(50000));
  auto list = parse_unary_test("1,2,3", ValueType::number);
  EXPECT_EQ(std::get<Disjunction>(list.node()).alternatives.size(), 3u);
  auto spaced = parse_unary_test("1, 234", ValueType::number);
  EXPECT_EQ(std::get<Disjunction>(spaced.node()).alternatives.size(), 2u);
}

TEST(UnaryTestParse, Errors) {
  EXPECT_EQ(kind_of([] { (void)parse_unary_test(""); }), ErrorKind::syntax_error);
  EXPECT_EQ(kind_of([] { (void)parse_unary_test(">"); }), ErrorKind::syntax_error);
  EXPECT_EQ(kind_of([] { (void)parse_unary_test(">= >= 18"); }), ErrorKind::syntax_error);
  EXPECT_EQ(kind_of([] { (void)parse_unary_test("Approved", ValueType::text); }), ErrorKind::syntax_error);
  EXPECT_EQ(kind_of([] { (void)parse_unary_test("\"x\"", ValueType::number); }), ErrorKind::type_mismatch);
  EXPECT_EQ(kind_of([] { (void)parse_unary_test("> 5", ValueType::boolean); }), ErrorKind::type_mismatch);
}

TEST(UnaryTestParse, CanonicalFormRoundTrips) {
  for (const char* src : {"> 50000", "<= 7.25", "[1..5)", "(1..5]", "\"A\", \"B\"", "-", "true", "-3"}) {
    auto t = parse_unary_test(src);
    EXPECT_EQ(parse_unary_test(t.to_feel()), t) << src;
  }
}

TEST(UnaryTestEval, Boundaries) {
  EXPECT_TRUE(eval_unary_test(parse_unary_test(">= 700"), Value::number(700)));
  EXPECT_FALSE(eval_unary_test(parse_unary_test(">= 700"), Value(Decimal(700) - Decimal::epsilon())));
  EXPECT_FALSE(eval_unary_test(parse_unary_test("> 50000"), Value::number(50000)));
  EXPECT_TRUE(eval_unary_test(parse_unary_test("> 50000"), Value(Decimal(50000) + Decimal::epsilon())));
  EXPECT_FALSE(eval_unary_test(parse_unary_test("[50..100]"), Value::number(101)));
  EXPECT_TRUE(eval_unary_test(parse_unary_test("[50..100]"), Value::number(100)));
  EXPECT_FALSE(eval_unary_test(parse_unary_test("[50..100)"), Value::number(100)));
  EXPECT_TRUE(eval_unary_test(parse_unary_test("-"), Value("anything")));
}

TEST(UnaryTestEval, TextEqualityIsExact) {
  auto t = parse_unary_test("\"Gold\"");
  EXPECT_TRUE(eval_unary_test(t, Value("Gold")));
  EXPECT_FALSE(eval_unary_test(t, Value("gold")));
  EXPECT_FALSE(eval_unary_test(t, Value("Gold ")));
}

TEST(UnaryTestEval, TypeMismatch) {
  EXPECT_EQ(kind_of([] { (void)eval_unary_test(parse_unary_test("> 5"), Value("x")); }), ErrorKind::type_mismatch);
  EXPECT_EQ(kind_of([] { (void)eval_unary_test(parse_unary_test("\"a\""), Value(true)); }), ErrorKind::type_mismatch);
}

TEST(LiteralExpression, LoanMessage) {
  auto chain = parse_literal_expression(R"(if Decision = "Approved" then "Loan approved." else "Loan rejected.")");
  ASSERT_EQ(chain.branches.size(), 1u);
  EXPECT_EQ(chain.default_message, "Loan rejected.");
  EXPECT_EQ(chain.referenced_variables(), std::vector<std::string>{"Decision"});
  EXPECT_EQ(eval_literal_expression(chain, {{"Decision", Value("Approved")}}), "Loan approved.");
  EXPECT_EQ(eval_literal_expression(chain, {{"Decision", Value("Rejected")}}), "Loan rejected.");
}

TEST(LiteralExpression, ConstantAndElseIf) {
  auto constant = parse_literal_expression("\"constant\"");
  EXPECT_TRUE(constant.branches.empty());
  EXPECT_EQ(eval_literal_expression(constant, {}), "constant");

  auto chain = parse_literal_expression(R"(if A = 1 then "one" else if B != "x" then "not x" else "other")");
  EXPECT_EQ(chain.branches.size(), 2u);
  EXPECT_EQ((chain.referenced_variables()), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(eval_literal_expression(chain, {{"A", Value::number(1)}}), "one");
  EXPECT_EQ(eval_literal_expression(chain, {{"A", Value::number(2)}, {"B", Value("y")}}), "not x");
  EXPECT_EQ(eval_literal_expression(chain, {{"A", Value::number(2)}, {"B", Value("x")}}), "other");
}

TEST(LiteralExpression, MultiWordNames) {
  auto chain = parse_literal_expression(R"(if Fee Class = "Free" then "free" else "paid")");
  EXPECT_EQ(chain.branches.at(0).condition.variable, "Fee Class");
}

TEST(LiteralExpression, MismatchedTypesDoNotHold) {
  auto chain = parse_literal_expression(R"(if A = 1 then "one" else "other")");
  EXPECT_EQ(eval_literal_expression(chain, {{"A", Value("1")}}), "other");
}

TEST(LiteralExpression, Errors) {
  EXPECT_EQ(kind_of([] { (void)parse_literal_expression(R"(if X = 1 then "a")"); }), ErrorKind::syntax_error);
  EXPECT_EQ(kind_of([] { (void)parse_literal_expression(""); }), ErrorKind::syntax_error);
  EXPECT_EQ(kind_of([] { (void)parse_literal_expression(R"(if X > 1 then "a" else "b")"); }),
            ErrorKind::unsupported_construct);
  EXPECT_EQ(kind_of([] { (void)parse_literal_expression(R"(upper case("a"))"); }), ErrorKind::unsupported_construct);
  auto chain = parse_literal_expression(R"(if X = 1 then "a" else "b")");
  EXPECT_EQ(kind_of([&] { (void)eval_literal_expression(chain, {}); }), ErrorKind::unbound_variable);
}
