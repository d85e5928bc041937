#include "feel_lexer.hpp"

namespace dmnprompt::feel::detail {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_word_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '?' || u >= 0x80;
}

bool is_word_char(char c) { return is_word_start(c) || is_digit(c); }

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace

void Lexer::advance() {
  while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r')) {
    ++pos_;
  }
  current_ = Token{};
  current_.offset = pos_;
  if (pos_ >= src_.size()) {
    current_.kind = Tok::end;
    return;
  }

  const std::size_t start = pos_;
  const char c = src_[pos_];
  auto at = [&](std::size_t i) -> char { return i < src_.size() ? src_[i] : '\0'; };

  if (is_digit(c) || (c == '.' && is_digit(at(pos_ + 1)))) {
    lex_number(start);
    return;
  }
  if (c == '-' && (is_digit(at(pos_ + 1)) || (at(pos_ + 1) == '.' && is_digit(at(pos_ + 2))))) {
    lex_number(start);
    return;
  }
  if (c == '"') {
    lex_string(start);
    return;
  }
  if (is_word_start(c)) {
    while (pos_ < src_.size() && is_word_char(src_[pos_])) ++pos_;
    current_.kind = Tok::word;
    current_.text.assign(src_.substr(start, pos_ - start));
    return;
  }

  auto single = [&](Tok kind) {
    current_.kind = kind;
    current_.text.assign(1, c);
    ++pos_;
  };
  auto pair = [&](Tok kind) {
    current_.kind = kind;
    current_.text.assign(src_.substr(pos_, 2));
    pos_ += 2;
  };

  switch (c) {
    case '-':
      single(Tok::dash);
      return;
    case '<':
      at(pos_ + 1) == '=' ? pair(Tok::le) : single(Tok::lt);
      return;
    case '>':
      at(pos_ + 1) == '=' ? pair(Tok::ge) : single(Tok::gt);
      return;
    case '=':
      single(Tok::eq);
      return;
    case '!':
      if (at(pos_ + 1) == '=') {
        pair(Tok::ne);
      } else {
        single(Tok::other);
      }
      return;
    case '[':
      single(Tok::lbracket);
      return;
    case ']':
      single(Tok::rbracket);
      return;
    case '(':
      single(Tok::lparen);
      return;
    case ')':
      single(Tok::rparen);
      return;
    case ',':
      single(Tok::comma);
      return;
    case '.':
      if (at(pos_ + 1) == '.') {
        pair(Tok::range);
      } else {
        single(Tok::other);
      }
      return;
    default:
      single(Tok::other);
      return;
  }
}

void Lexer::lex_number(std::size_t start) {
  if (src_[pos_] == '-') ++pos_;
  while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
  // "50,000": a comma followed by exactly three digits continues the number
  while (pos_ + 3 < src_.size() && src_[pos_] == ',' && is_digit(src_[pos_ + 1]) && is_digit(src_[pos_ + 2]) &&
         is_digit(src_[pos_ + 3]) && (pos_ + 4 >= src_.size() || !is_digit(src_[pos_ + 4]))) {
    pos_ += 4;
  }
  if (pos_ + 1 < src_.size() && src_[pos_] == '.' && is_digit(src_[pos_ + 1])) {
    ++pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
  }
  current_.kind = Tok::number;
  current_.text.assign(src_.substr(start, pos_ - start));
}

void Lexer::lex_string(std::size_t start) {
  ++pos_;  // opening quote
  std::string value;
  while (true) {
    if (pos_ >= src_.size()) {
      throw FeelError(ErrorKind::syntax_error,
                      "unterminated string literal at offset " + std::to_string(start) + " in '" + std::string(src_) + "'");
    }
    char c = src_[pos_++];
    if (c == '"') break;
    if (c != '\\') {
      value += c;
      continue;
    }
    if (pos_ >= src_.size()) continue;
    char e = src_[pos_++];
    switch (e) {
      case 'n':
        value += '\n';
        break;
      case 't':
        value += '\t';
        break;
      case 'r':
        value += '\r';
        break;
      case 'u': {
        if (pos_ + 4 > src_.size()) throw FeelError(ErrorKind::syntax_error, "bad \\u escape");
        unsigned cp = 0;
        for (int k = 0; k < 4; ++k) {
          char h = src_[pos_++];
          cp <<= 4;
          if (h >= '0' && h <= '9') {
            cp |= static_cast<unsigned>(h - '0');
          } else if (h >= 'a' && h <= 'f') {
            cp |= static_cast<unsigned>(h - 'a' + 10);
          } else if (h >= 'A' && h <= 'F') {
            cp |= static_cast<unsigned>(h - 'A' + 10);
          } else {
            throw FeelError(ErrorKind::syntax_error, "bad \\u escape");
          }
        }
        append_utf8(value, cp);
        break;
      }
      default:
        value += e;  // \" \\ and unknown escapes keep the character
    }
  }
  current_.kind = Tok::string;
  current_.text = std::move(value);
}

std::string describe(const Token& token) {
  switch (token.kind) {
    case Tok::end:
      return "end of input";
    case Tok::string:
      return "string \"" + token.text + "\"";
    case Tok::number:
      return "number " + token.text;
    case Tok::word:
      return "'" + token.text + "'";
    default:
      return "'" + token.text + "'";
  }
}

}  // namespace dmnprompt::feel::detail
