#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "dmnprompt/decimal.hpp"

namespace dmnprompt {

enum class ValueType { number, text, boolean };

std::string_view to_string(ValueType type) noexcept;

/// Maps DMN typeRef spellings ("number", "string", "integer", "boolean", ...)
/// to a ValueType. Unknown spellings yield nullopt.
std::optional<ValueType> value_type_from_type_ref(std::string_view type_ref) noexcept;

/// DMN typeRef emitted for a value type when writing XML.
std::string_view type_ref_for(ValueType type) noexcept;

/// A cell or context value: exact decimal, text, or boolean.
class Value {
 public:
  Value() : data_(std::string()) {}
  Value(Decimal number) : data_(number) {}                // NOLINT(google-explicit-constructor)
  Value(std::string text) : data_(std::move(text)) {}     // NOLINT(google-explicit-constructor)
  Value(const char* text) : data_(std::string(text)) {}   // NOLINT(google-explicit-constructor)
  Value(bool flag) : data_(flag) {}                       // NOLINT(google-explicit-constructor)

  static Value number(std::int64_t n) { return Value(Decimal(n)); }

  [[nodiscard]] ValueType type() const noexcept;
  [[nodiscard]] bool is_number() const noexcept { return std::holds_alternative<Decimal>(data_); }
  [[nodiscard]] bool is_text() const noexcept { return std::holds_alternative<std::string>(data_); }
  [[nodiscard]] bool is_boolean() const noexcept { return std::holds_alternative<bool>(data_); }

  [[nodiscard]] const Decimal& as_number() const { return std::get<Decimal>(data_); }
  [[nodiscard]] const std::string& as_text() const { return std::get<std::string>(data_); }
  [[nodiscard]] bool as_boolean() const { return std::get<bool>(data_); }

  /// FEEL literal form: 50000, "Approved" (quoted, escaped), true.
  [[nodiscard]] std::string to_feel() const;
  /// Human form: text unquoted.
  [[nodiscard]] std::string to_display() const;

  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::variant<Decimal, std::string, bool> data_;
};

/// Quotes and escapes text as a FEEL string literal.
std::string quote_feel_string(std::string_view text);

/// Variable bindings used to evaluate unary tests and literal expressions.
class EvaluationContext {
 public:
  EvaluationContext() = default;
  EvaluationContext(std::initializer_list<std::pair<const std::string, Value>> init) : bindings_(init) {}

  void bind(std::string name, Value value) { bindings_.insert_or_assign(std::move(name), std::move(value)); }
  [[nodiscard]] const Value* find(std::string_view name) const;
  [[nodiscard]] bool contains(std::string_view name) const { return find(name) != nullptr; }
  [[nodiscard]] const std::map<std::string, Value, std::less<>>& bindings() const noexcept { return bindings_; }
  [[nodiscard]] bool empty() const noexcept { return bindings_.empty(); }

  friend bool operator==(const EvaluationContext&, const EvaluationContext&) = default;

 private:
  std::map<std::string, Value, std::less<>> bindings_;
};

}  // namespace dmnprompt
