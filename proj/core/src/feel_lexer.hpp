#pragma once

#include <string>
#include <string_view>

#include "dmnprompt/feel.hpp"

namespace dmnprompt::feel::detail {

enum class Tok {
  end,
  number,
  string,
  word,
  dash,       // -
  lt,         // <
  le,         // <=
  gt,         // >
  ge,         // >=
  eq,         // =
  ne,         // !=
  lbracket,   // [
  rbracket,   // ]
  lparen,     // (
  rparen,     // )
  range,      // ..
  comma,      // ,
  other,      // any other FEEL punctuation (+ * / { } : ...)
};

struct Token {
  Tok kind = Tok::end;
  std::string text;  // decoded string, number spelling, word, or the raw character
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) { advance(); }

  [[nodiscard]] const Token& peek() const noexcept { return current_; }
  Token next() {
    Token t = current_;
    advance();
    return t;
  }
  [[nodiscard]] std::string_view source() const noexcept { return src_; }

 private:
  void advance();
  void lex_number(std::size_t start);
  void lex_string(std::size_t start);

  std::string_view src_;
  std::size_t pos_ = 0;
  Token current_;
};

std::string describe(const Token& token);

}  // namespace dmnprompt::feel::detail
