#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bilindblad/expr.hpp"
#include "bilindblad/parser.hpp"

using namespace bilindblad::sym;

namespace {

Expr S(const std::string& n) { return Expr::symbol(n); }

// Random polynomial in the given symbols, built from a seeded generator.
Expr random_poly(std::mt19937_64& rng, const std::vector<std::string>& vars,
                 int max_terms = 4, int max_deg = 3) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> coeff(-5, 5);
  std::uniform_int_distribution<int> deg(0, max_deg);
  Expr e;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    int c = coeff(rng);
    if (c == 0) c = 1;
    Expr term = Expr::constant(c);
    for (const auto& v : vars) term = term * S(v).pow(deg(rng));
    e += term;
  }
  return e;
}

}  // namespace

TEST_CASE("differentiation follows the chain rule exactly") {
  Expr z = S("z");
  Expr e = exp(-z);
  CHECK(e.derivative("z") == -exp(-z));

  Expr m1 = S("m1"), m2 = S("m2"), m3 = S("m3");
  Expr c1 = m1 * m1 + m2 * m3;
  CHECK(c1.derivative("m1") == 2 * m1);

  Expr p = S("p");
  Expr root = sqrt(Expr::constant(1) + p * p);
  Expr expected = p * sqrt(Expr::constant(1) + p * p).pow(-1);
  CHECK(root.derivative("p") == expected);

  // Independent variables differentiate to zero.
  CHECK(c1.derivative("z").is_structurally_zero());
}

TEST_CASE("zero detection") {
  Expr z = S("z");
  CHECK((exp(-z) - exp(-z)).zero_test().kind == Zero::ExactZero);

  Expr m2 = S("m2"), m3 = S("m3");
  Expr diff = m2 * m2 - m3 * m3 - (m2 - m3) * (m2 + m3);
  CHECK(diff.zero_test().kind == Zero::ExactZero);

  Expr s = S("m1") + m2 + m3;
  auto zt = s.zero_test();
  CHECK(zt.kind == Zero::NonZero);
  // Direct-evaluation oracle at (1,0,0).
  std::map<std::uint32_t, double> point{{Symbols::id("m1"), 1.0},
                                        {Symbols::id("m2"), 0.0},
                                        {Symbols::id("m3"), 0.0}};
  CHECK(s.evaluate(point) == doctest::Approx(1.0));
}

TEST_CASE("sqrt and Laurent normalization") {
  Expr m = S("m");
  // sqrt(R)^2 folds back into the radicand.
  Expr r = sqrt(Expr::constant(1) + m);
  CHECK(r * r == Expr::constant(1) + m);
  // R * sqrt(R)^-1 reduces to sqrt(R).
  Expr red = (Expr::constant(1) + m) * r.pow(-1);
  CHECK(red == r);
  // Perfect-square content extraction.
  CHECK(sqrt(Expr::constant(4) + 4 * m) == 2 * r);
  CHECK(sqrt(Expr::constant(9, 4)) == Expr::constant(3, 2));
  // Laurent monomials invert exactly.
  Expr rr = S("r");
  CHECK(rr.pow(-1) * rr == Expr::constant(1));
  CHECK_THROWS_AS((m + rr).pow(-1), ExprError);
}

TEST_CASE("exp factors merge through the argument") {
  Expr z = S("z");
  CHECK(exp(-z) * exp(-z) == exp(-2 * z));
  CHECK(exp(z) * exp(-z) == Expr::constant(1));
  CHECK(exp(Expr::zero()) == Expr::constant(1));
}

TEST_CASE("evaluation respects domains") {
  Expr p = S("p");
  Expr root = sqrt(Expr::constant(-1) + p);
  std::map<std::uint32_t, double> bad{{Symbols::id("p"), 0.0}};
  CHECK_THROWS_AS(root.evaluate(bad), DomainError);
  std::map<std::uint32_t, double> good{{Symbols::id("p"), 5.0}};
  CHECK(root.evaluate(good) == doctest::Approx(2.0));
}

TEST_CASE("substitution composes with simplification") {
  Expr m1 = S("m1"), m2 = S("m2"), m3 = S("m3");
  Expr lift = sqrt(m1 * m1 + m2 * m2 + m3 * m3);
  Expr restricted = lift.substitute({{Symbols::id("m1"), Expr::constant(1)}});
  CHECK(restricted == sqrt(Expr::constant(1) + m2 * m2 + m3 * m3));
}

TEST_CASE("parser round-trips the printer") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 25; ++i) {
    Expr e = random_poly(rng, {"x", "y"});
    Expr back = parse_expr(e.str());
    CHECK(back == e);
  }
  Expr mix = parse_expr("3/2*x^2 - exp(-z) + sqrt(1+p^2)^-1");
  CHECK(parse_expr(mix.str()) == mix);
}

TEST_CASE("parser diagnostics") {
  CHECK_THROWS_AS(parse_expr("1 +"), ParseError);
  CHECK_THROWS_AS(parse_expr("foo("), ParseError);
  ParseContext ctx;
  ctx.allowed = {"m1", "m2"};
  CHECK_THROWS_AS(parse_expr("m1 + q", ctx), ParseError);
  CHECK(parse_expr("m1*m2", ctx) == S("m1") * S("m2"));
}

TEST_CASE("arithmetic is a commutative ring (randomized)") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    Expr a = random_poly(rng, {"x", "y", "z"});
    Expr b = random_poly(rng, {"x", "y", "z"});
    Expr c = random_poly(rng, {"x", "y", "z"});
    CHECK((a * b - b * a).is_structurally_zero());
    CHECK(((a + b) * c - (a * c + b * c)).is_structurally_zero());
    CHECK(((a * b) * c - a * (b * c)).is_structurally_zero());
  }
}
