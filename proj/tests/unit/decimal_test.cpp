#include <gtest/gtest.h>

#include <random>

#include "dmnprompt/decimal.hpp"
#include "dmnprompt/value.hpp"

using dmnprompt::Decimal;
using dmnprompt::Value;
using dmnprompt::ValueType;

TEST(Decimal, ParsesPlainForms) {
  EXPECT_EQ(Decimal::parse("50000"), Decimal(50000));
  EXPECT_EQ(Decimal::parse("-12.5").to_string(), "-12.5");
  EXPECT_EQ(Decimal::parse(".25").to_string(), "0.25");
  EXPECT_EQ(Decimal::parse("700.000").to_string(), "700");
  EXPECT_EQ(Decimal::parse("0").to_string(), "0");
}

TEST(Decimal, ThousandsSeparatorsMustBeWellGrouped) {
  EXPECT_EQ(Decimal::parse("50,000"), Decimal(50000));
  EXPECT_EQ(Decimal::parse("1,234,567.5").to_string(), "1234567.5");
  EXPECT_FALSE(Decimal::try_parse("50,00").has_value());
  EXPECT_FALSE(Decimal::try_parse("5000,000").has_value());
  EXPECT_FALSE(Decimal::try_parse(",500").has_value());
}

TEST(Decimal, RejectsJunk) {
  for (const char* bad : {"", "-", ".", "1.2.3", "12a", "1e5", " 1", "+-1"}) {
    EXPECT_FALSE(Decimal::try_parse(bad).has_value()) << bad;
  }
  EXPECT_THROW(Decimal::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Decimal::parse("0.0000000000000000001"), std::out_of_range);
}

TEST(Decimal, EpsilonSeparatesBoundaries) {
  const Decimal boundary(50000);
  EXPECT_LT(boundary, boundary + Decimal::epsilon());
  EXPECT_GT(boundary, boundary - Decimal::epsilon());
  EXPECT_EQ((boundary + Decimal::epsilon()).to_string(), "50000.000000000000000001");
}

TEST(Decimal, FromDoubleUsesShortestForm) {
  EXPECT_EQ(Decimal::from_double(0.1).to_string(), "0.1");
  EXPECT_EQ(Decimal::from_double(99.99).to_string(), "99.99");
  EXPECT_EQ(Decimal::from_double(-3.0), Decimal(-3));
}

TEST(Decimal, OrderingMatchesScaledIntegers) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> whole(-1000000, 1000000);
  std::uniform_int_distribution<int> frac(0, 999);
  for (int i = 0; i < 5000; ++i) {
    const std::int64_t aw = whole(rng), bw = whole(rng);
    const int af = frac(rng), bf = frac(rng);
    auto text = [](std::int64_t w, int f) {
      std::string digits = std::to_string(f);
      digits.insert(0, 3 - digits.size(), '0');
      const bool neg = w < 0;
      return std::string(neg ? "-" : "") + std::to_string(neg ? -w : w) + "." + digits;
    };
    auto scaled = [](std::int64_t w, int f) { return w < 0 ? w * 1000 - f : w * 1000 + f; };
    const auto a = Decimal::parse(text(aw, af));
    const auto b = Decimal::parse(text(bw, bf));
    EXPECT_EQ(a < b, scaled(aw, af) < scaled(bw, bf));
    EXPECT_EQ(a == b, scaled(aw, af) == scaled(bw, bf));
    EXPECT_EQ(Decimal::parse(a.to_string()), a);
  }
}

TEST(Value, FeelAndDisplayForms) {
  EXPECT_EQ(Value("Approved").to_feel(), "\"Approved\"");
  EXPECT_EQ(Value("Approved").to_display(), "Approved");
  EXPECT_EQ(Value("say \"hi\"").to_feel(), "\"say \\\"hi\\\"\"");
  EXPECT_EQ(Value(true).to_feel(), "true");
  EXPECT_EQ(Value::number(700).to_feel(), "700");
}

TEST(Value, TypeRefMapping) {
  EXPECT_EQ(dmnprompt::value_type_from_type_ref("number"), ValueType::number);
  EXPECT_EQ(dmnprompt::value_type_from_type_ref("integer"), ValueType::number);
  EXPECT_EQ(dmnprompt::value_type_from_type_ref("string"), ValueType::text);
  EXPECT_EQ(dmnprompt::value_type_from_type_ref("boolean"), ValueType::boolean);
  EXPECT_FALSE(dmnprompt::value_type_from_type_ref("date").has_value());
}
