#include <algorithm>
#include <array>

#include "dmnprompt/feel.hpp"
#include "feel_lexer.hpp"

namespace dmnprompt::feel {

using detail::Lexer;
using detail::Tok;
using detail::Token;

namespace {

constexpr std::array<std::string_view, 12> kUnsupportedWords = {
    "and", "or", "not", "for", "some", "every", "in", "function", "null", "satisfies", "between", "instance"};

bool is_unsupported_word(const Token& t) {
  return t.kind == Tok::word &&
         std::find(kUnsupportedWords.begin(), kUnsupportedWords.end(), t.text) != kUnsupportedWords.end();
}

bool is_keyword(const Token& t) {
  return t.kind == Tok::word && (t.text == "if" || t.text == "then" || t.text == "else");
}

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view source) : lx_(source), source_(source) {}

  IfChain parse() {
    IfChain chain;
    if (lx_.peek().kind == Tok::end) syntax("empty literal expression");
    if (lx_.peek().kind == Tok::string) {
      chain.default_message = lx_.next().text;
      expect_end();
      return chain;
    }
    if (!is_word("if")) {
      if (lx_.peek().kind == Tok::word) unsupported("'" + lx_.peek().text + "' starts a FEEL expression outside the subset");
      unexpected("expected 'if' or a string");
    }

    while (true) {
      lx_.next();  // 'if'
      Branch b;
      b.condition = parse_condition();
      expect_word("then");
      b.consequent = parse_message();
      chain.branches.push_back(std::move(b));

      if (lx_.peek().kind == Tok::end) syntax("missing 'else' branch");
      expect_word("else");
      if (is_word("if")) continue;
      chain.default_message = parse_message();
      expect_end();
      return chain;
    }
  }

 private:
  bool is_word(std::string_view w) const { return lx_.peek().kind == Tok::word && lx_.peek().text == w; }

  [[noreturn]] void syntax(const std::string& msg) const {
    throw FeelError(ErrorKind::syntax_error, msg + " in '" + std::string(source_) + "'");
  }

  [[noreturn]] void unsupported(const std::string& msg) const {
    throw FeelError(ErrorKind::unsupported_construct, msg + " in '" + std::string(source_) + "'");
  }

  // Constructs valid in full FEEL but outside the subset are reported as
  // unsupported rather than as syntax errors.
  [[noreturn]] void unexpected(const std::string& what) const {
    const Token& t = lx_.peek();
    if (is_unsupported_word(t)) unsupported("'" + t.text + "' is not supported");
    switch (t.kind) {
      case Tok::lt:
      case Tok::le:
      case Tok::gt:
      case Tok::ge:
      case Tok::lparen:
      case Tok::rparen:
      case Tok::lbracket:
      case Tok::rbracket:
      case Tok::range:
      case Tok::comma:
      case Tok::dash:
      case Tok::other:
        unsupported(describe(t) + " is not supported");
      default:
        syntax(what + ", found " + describe(t));
    }
  }

  void expect_word(std::string_view w) {
    if (!is_word(w)) unexpected("expected '" + std::string(w) + "'");
    lx_.next();
  }

  void expect_end() {
    if (lx_.peek().kind != Tok::end) unexpected("expected end of expression");
  }

  Condition parse_condition() {
    Condition c;
    std::string name;
    while (lx_.peek().kind == Tok::word && !is_keyword(lx_.peek())) {
      if (is_unsupported_word(lx_.peek())) unexpected("expected a variable name");
      if (!name.empty()) name += ' ';
      name += lx_.next().text;
    }
    if (name.empty()) unexpected("expected a variable name");
    if (name == "true" || name == "false") unexpected("expected a variable name");
    c.variable = std::move(name);

    if (lx_.peek().kind == Tok::eq) {
      c.op = EqualityOp::equal;
    } else if (lx_.peek().kind == Tok::ne) {
      c.op = EqualityOp::not_equal;
    } else {
      unexpected("expected '=' or '!='");
    }
    lx_.next();

    Token lit = lx_.next();
    switch (lit.kind) {
      case Tok::string:
        c.value = Value(lit.text);
        break;
      case Tok::number:
        try {
          c.value = Value(Decimal::parse(lit.text));
        } catch (const std::exception& e) {
          syntax(e.what());
        }
        break;
      case Tok::word:
        if (lit.text == "true" || lit.text == "false") {
          c.value = Value(lit.text == "true");
          break;
        }
        unsupported("comparison against variable '" + lit.text + "' is not supported");
      default:
        syntax("expected a literal after comparison, found " + describe(lit));
    }
    if (is_unsupported_word(lx_.peek())) unexpected("expected 'then'");
    return c;
  }

  std::string parse_message() {
    const Token& t = lx_.peek();
    if (t.kind == Tok::string) return lx_.next().text;
    if (t.kind == Tok::number || t.kind == Tok::word) {
      if (is_keyword(t)) syntax("expected a message string, found " + describe(t));
      unsupported("message must be a string literal, found " + describe(t));
    }
    unexpected("expected a message string");
  }

  Lexer lx_;
  std::string_view source_;
};

}  // namespace

std::vector<std::string> IfChain::referenced_variables() const {
  std::vector<std::string> out;
  for (const auto& b : branches) {
    if (std::find(out.begin(), out.end(), b.condition.variable) == out.end()) out.push_back(b.condition.variable);
  }
  return out;
}

IfChain parse_literal_expression(std::string_view source) { return ExpressionParser(source).parse(); }

std::string eval_literal_expression(const IfChain& chain, const EvaluationContext& ctx) {
  for (const auto& b : chain.branches) {
    const Value* v = ctx.find(b.condition.variable);
    if (v == nullptr) {
      throw FeelError(ErrorKind::unbound_variable, "variable '" + b.condition.variable + "' is not bound");
    }
    bool holds = false;
    if (v->type() == b.condition.value.type()) {
      bool equal = *v == b.condition.value;
      holds = b.condition.op == EqualityOp::equal ? equal : !equal;
    }
    if (holds) return b.consequent;
  }
  return chain.default_message;
}

}  // namespace dmnprompt::feel
