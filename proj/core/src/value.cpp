#include "dmnprompt/value.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace dmnprompt {

std::string_view to_string(ValueType type) noexcept {
  switch (type) {
    case ValueType::number:
      return "number";
    case ValueType::text:
      return "text";
    case ValueType::boolean:
      return "boolean";
  }
  return "text";
}

std::optional<ValueType> value_type_from_type_ref(std::string_view type_ref) noexcept {
  std::string lower(type_ref);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  // feel:number and friends appear in DMN 1.1 files
  if (auto colon = lower.find(':'); colon != std::string::npos) lower.erase(0, colon + 1);

  static constexpr std::array<std::string_view, 6> numeric = {"number", "integer", "long", "double", "decimal",
                                                               "int"};
  if (std::find(numeric.begin(), numeric.end(), lower) != numeric.end()) return ValueType::number;
  if (lower == "string" || lower == "text") return ValueType::text;
  if (lower == "boolean" || lower == "bool") return ValueType::boolean;
  return std::nullopt;
}

std::string_view type_ref_for(ValueType type) noexcept {
  switch (type) {
    case ValueType::number:
      return "number";
    case ValueType::text:
      return "string";
    case ValueType::boolean:
      return "boolean";
  }
  return "string";
}

ValueType Value::type() const noexcept {
  if (is_number()) return ValueType::number;
  if (is_boolean()) return ValueType::boolean;
  return ValueType::text;
}

std::string quote_feel_string(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  out += '"';
  for (char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        out += c;
    }
  }
  out += '"';
  return out;
}

std::string Value::to_feel() const {
  if (is_number()) return as_number().to_string();
  if (is_boolean()) return as_boolean() ? "true" : "false";
  return quote_feel_string(as_text());
}

std::string Value::to_display() const {
  if (is_text()) return as_text();
  return to_feel();
}

const Value* EvaluationContext::find(std::string_view name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

}  // namespace dmnprompt
