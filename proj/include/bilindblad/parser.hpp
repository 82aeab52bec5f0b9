#pragma once

#include <set>
#include <string>

#include "bilindblad/expr.hpp"

namespace bilindblad::sym {

struct ParseError : ExprError {
  ParseError(const std::string& what, std::size_t pos)
      : ExprError(what), position(pos) {}
  std::size_t position;  // 0-based offset into the input
};

/// Restricts identifiers when non-empty; unknown names raise ParseError.
struct ParseContext {
  std::set<std::string> allowed;
};

/// Grammar: rationals `a/b`, identifiers, `+ - * ^`, `exp(...)`, `sqrt(...)`,
/// parentheses. `^` takes an integer exponent (possibly negative).
Expr parse_expr(const std::string& text, const ParseContext& ctx = {});

}  // namespace bilindblad::sym
