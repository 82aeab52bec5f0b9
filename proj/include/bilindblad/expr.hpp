#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace bilindblad::sym {

using Rat = mpq_class;

struct ExprError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : ExprError {
  using ExprError::ExprError;
};

/// Interned symbol names. Coordinates and formal parameters share one
/// namespace; charts decide which role a symbol plays.
class Symbols {
 public:
  static std::uint32_t id(const std::string& name);
  static const std::string& name(std::uint32_t id);
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct VarPow {
  std::uint32_t var;
  std::int32_t exp;  // nonzero, may be negative
};

struct SqrtPow {
  ExprPtr radicand;  // canonical, nonzero
  std::int32_t exp;  // odd; +1 after normalization unless negative
};

/// One normalized term: coeff * prod(var^e) * exp(arg) * prod(sqrt(rad)^e).
struct Term {
  Rat coeff;
  std::vector<VarPow> mono;    // sorted by var id
  ExprPtr exp_arg;             // nullptr when absent
  std::vector<SqrtPow> sqrts;  // sorted by radicand, distinct radicands
};

enum class Zero { ExactZero, ProbabilisticZero, NonZero, Inconclusive };

struct ZeroTest {
  Zero kind;
  double witness = 0.0;  // largest |value| seen over admissible samples
  bool is_zero() const {
    return kind == Zero::ExactZero || kind == Zero::ProbabilisticZero;
  }
};

/// Exact scalar field: Laurent polynomials over Q in named symbols, closed
/// under exp- and sqrt-composition. Kept in a canonical sum-of-terms normal
/// form; all arithmetic renormalizes.
class Expr {
 public:
  Expr() = default;  // zero

  static Expr zero() { return Expr{}; }
  static Expr constant(const Rat& c);
  static Expr constant(long num, long den = 1);
  static Expr symbol(const std::string& name);
  static Expr symbol(std::uint32_t id);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

  /// Integer power. Negative exponents require a single-term base.
  Expr pow(std::int32_t n) const;

  bool is_structurally_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::optional<Rat> as_constant() const;

  Expr derivative(std::uint32_t var) const;
  Expr derivative(const std::string& var) const;

  Expr substitute(const std::map<std::uint32_t, Expr>& bindings) const;

  /// Evaluate with double arithmetic; throws DomainError on negative sqrt
  /// arguments or division by zero.
  double evaluate(const std::map<std::uint32_t, double>& point) const;

  /// Structural check first, then randomized rational sampling (>= 16
  /// admissible points) as a declared probabilistic fallback.
  ZeroTest zero_test(std::uint64_t seed = 0x5eed) const;
  bool is_zero(std::uint64_t seed = 0x5eed) const {
    return zero_test(seed).is_zero();
  }

  /// Every symbol id occurring anywhere in the tree.
  std::vector<std::uint32_t> symbols() const;

  std::string str() const;

  static int compare(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b) {
    return compare(a, b) == 0;
  }
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  const std::vector<Term>& terms() const { return terms_; }

  // Construction from raw terms (renormalizes).
  static Expr from_terms(std::vector<Term> terms);

 private:
  std::vector<Term> terms_;
  friend Expr exp(const Expr& a);
  friend Expr sqrt(const Expr& a);
};

Expr exp(const Expr& a);
Expr sqrt(const Expr& a);

inline Expr operator*(const Rat& c, const Expr& e) {
  return Expr::constant(c) * e;
}
inline Expr operator*(long c, const Expr& e) { return Expr::constant(c) * e; }

}  // namespace bilindblad::sym
