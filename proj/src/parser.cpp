#include "bilindblad/parser.hpp"

#include <cctype>

namespace bilindblad::sym {

namespace {

class Parser {
 public:
  Parser(const std::string& text, const ParseContext& ctx)
      : text_(text), ctx_(ctx) {}

  Expr run() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& text_;
  const ParseContext& ctx_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at column " + std::to_string(pos_ + 1), pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_sum() {
    Expr e = parse_product();
    while (true) {
      if (eat('+'))
        e = e + parse_product();
      else if (eat('-'))
        e = e - parse_product();
      else
        return e;
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    while (eat('*')) e = e * parse_unary();
    return e;
  }

  Expr parse_unary() {
    if (eat('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    while (eat('^')) {
      bool neg = eat('-');
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      if (pos_ == start) fail("expected integer exponent");
      long v = std::stol(text_.substr(start, pos_ - start));
      base = base.pow(static_cast<std::int32_t>(neg ? -v : v));
    }
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_rational();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_rational() {
    mpz_class num = parse_integer();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      // Lookahead: a denominator must follow directly.
      std::size_t save = pos_;
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        mpz_class den = parse_integer();
        if (den == 0) fail("zero denominator");
        return Expr::constant(Rat(num, den));
      }
      pos_ = save;
    }
    return Expr::constant(Rat(num));
  }

  mpz_class parse_integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected integer");
    return mpz_class(text_.substr(start, pos_ - start));
  }

  Expr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "exp" || name == "sqrt") {
      if (!eat('(')) fail("expected '(' after '" + name + "'");
      Expr arg = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return name == "exp" ? sym::exp(arg) : sym::sqrt(arg);
    }
    if (!ctx_.allowed.empty() && !ctx_.allowed.count(name)) {
      pos_ = start;
      fail("unknown symbol '" + name + "'");
    }
    return Expr::symbol(name);
  }
};

}  // namespace

Expr parse_expr(const std::string& text, const ParseContext& ctx) {
  return Parser(text, ctx).run();
}

}  // namespace bilindblad::sym
