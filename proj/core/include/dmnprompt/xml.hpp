#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Minimal namespace-aware DOM built on expat; shared by the DMN and PNML readers.
namespace dmnprompt::xml {

class XmlError : public std::runtime_error {
 public:
  XmlError(const std::string& what, long line) : std::runtime_error(what), line_(line) {}
  [[nodiscard]] long line() const noexcept { return line_; }

 private:
  long line_;
};

struct Attribute {
  std::string ns;
  std::string name;
  std::string value;
};

struct Element {
  std::string ns;    // namespace URI, empty when unqualified
  std::string name;  // local name
  std::vector<Attribute> attributes;
  std::vector<Element> children;
  std::string text;  // character data directly inside this element
  long line = 0;

  /// Unqualified attribute lookup (DMN and PNML attributes carry no prefix).
  [[nodiscard]] std::optional<std::string> attr(std::string_view local) const;
  [[nodiscard]] const Element* child(std::string_view local) const;
  [[nodiscard]] std::vector<const Element*> children_named(std::string_view local) const;
  /// Trimmed text of the first `<local>` child, if present.
  [[nodiscard]] std::optional<std::string> child_text(std::string_view local) const;
};

/// Parses a complete document and returns its root element.
/// Throws XmlError on malformed input.
Element parse(std::string_view document);

std::string escape_text(std::string_view text);
std::string escape_attribute(std::string_view text);

std::string trim(std::string_view text);

}  // namespace dmnprompt::xml
