#include "bilindblad/expr.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>
#include <unordered_map>

namespace bilindblad::sym {

namespace {

std::mutex g_symbols_mutex;
std::vector<std::string> g_symbol_names;
std::unordered_map<std::string, std::uint32_t> g_symbol_ids;

}  // namespace

std::uint32_t Symbols::id(const std::string& name) {
  std::lock_guard<std::mutex> lock(g_symbols_mutex);
  auto it = g_symbol_ids.find(name);
  if (it != g_symbol_ids.end()) return it->second;
  auto id = static_cast<std::uint32_t>(g_symbol_names.size());
  g_symbol_names.push_back(name);
  g_symbol_ids.emplace(name, id);
  return id;
}

const std::string& Symbols::name(std::uint32_t id) {
  std::lock_guard<std::mutex> lock(g_symbols_mutex);
  return g_symbol_names.at(id);
}

// ---------------------------------------------------------------------------
// Ordering

namespace {

int cmp_rat(const Rat& a, const Rat& b) {
  return mpq_cmp(a.get_mpq_t(), b.get_mpq_t());
}

int cmp_expr_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return 0;
  if (!a) return b ? -1 : 0;
  if (!b) return 1;
  return Expr::compare(*a, *b);
}

int cmp_mono(const std::vector<VarPow>& a, const std::vector<VarPow>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].var != b[i].var) return a[i].var < b[i].var ? -1 : 1;
    if (a[i].exp != b[i].exp) return a[i].exp < b[i].exp ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int cmp_sqrts(const std::vector<SqrtPow>& a, const std::vector<SqrtPow>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp_expr_ptr(a[i].radicand, b[i].radicand);
    if (c != 0) return c;
    if (a[i].exp != b[i].exp) return a[i].exp < b[i].exp ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

// Key order used for merging; the coefficient is not part of the key.
int cmp_term_key(const Term& a, const Term& b) {
  int c = cmp_mono(a.mono, b.mono);
  if (c != 0) return c;
  c = cmp_expr_ptr(a.exp_arg, b.exp_arg);
  if (c != 0) return c;
  return cmp_sqrts(a.sqrts, b.sqrts);
}

struct TermKeyLess {
  bool operator()(const Term& a, const Term& b) const {
    return cmp_term_key(a, b) < 0;
  }
};

}  // namespace

int Expr::compare(const Expr& a, const Expr& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp_term_key(a.terms_[i], b.terms_[i]);
    if (c != 0) return c;
    c = cmp_rat(a.terms_[i].coeff, b.terms_[i].coeff);
    if (c != 0) return c;
  }
  if (a.terms_.size() != b.terms_.size())
    return a.terms_.size() < b.terms_.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Polynomial helpers for normalization

namespace {

bool mono_is_polynomial(const std::vector<VarPow>& mono) {
  for (const auto& vp : mono)
    if (vp.exp < 0) return false;
  return true;
}

bool gradedlex_less(const std::vector<VarPow>& a,
                    const std::vector<VarPow>& b) {
  long da = 0, db = 0;
  for (const auto& vp : a) da += vp.exp;
  for (const auto& vp : b) db += vp.exp;
  if (da != db) return da < db;
  return cmp_mono(a, b) < 0;
}

std::vector<VarPow> mono_mul(const std::vector<VarPow>& a,
                             const std::vector<VarPow>& b) {
  std::vector<VarPow> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].var < b[j].var)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].var < a[i].var) {
      out.push_back(b[j++]);
    } else {
      std::int32_t e = a[i].exp + b[j].exp;
      if (e != 0) out.push_back({a[i].var, e});
      ++i;
      ++j;
    }
  }
  return out;
}

std::optional<std::vector<VarPow>> mono_div(const std::vector<VarPow>& a,
                                            const std::vector<VarPow>& b) {
  std::vector<VarPow> inv = b;
  for (auto& vp : inv) vp.exp = -vp.exp;
  auto q = mono_mul(a, inv);
  if (!mono_is_polynomial(q)) return std::nullopt;
  return q;
}

struct PolyTerm {
  Rat coeff;
  std::vector<VarPow> mono;
};

// Single-divisor multivariate division with remainder (graded-lex). The
// remainder contains no term divisible by the divisor's leading monomial.
std::pair<std::vector<PolyTerm>, std::vector<PolyTerm>> poly_divide(
    std::vector<PolyTerm> p, const std::vector<PolyTerm>& divisor) {
  if (divisor.empty()) throw ExprError("division by zero polynomial");
  std::vector<PolyTerm> quot, rem;
  std::size_t lead = 0;
  for (std::size_t i = 1; i < divisor.size(); ++i)
    if (gradedlex_less(divisor[lead].mono, divisor[i].mono)) lead = i;

  auto add_to = [](std::vector<PolyTerm>& v, const Rat& c,
                   const std::vector<VarPow>& m) {
    if (c == 0) return;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (cmp_mono(v[i].mono, m) == 0) {
        v[i].coeff += c;
        if (v[i].coeff == 0) {
          v[i] = std::move(v.back());
          v.pop_back();
        }
        return;
      }
    }
    v.push_back({c, m});
  };

  while (!p.empty()) {
    std::size_t pl = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (gradedlex_less(p[pl].mono, p[i].mono)) pl = i;
    auto q = mono_div(p[pl].mono, divisor[lead].mono);
    if (!q) {
      rem.push_back(std::move(p[pl]));
      p[pl] = std::move(p.back());
      p.pop_back();
      continue;
    }
    Rat qc = p[pl].coeff / divisor[lead].coeff;
    add_to(quot, qc, *q);
    for (const auto& dt : divisor)
      add_to(p, -qc * dt.coeff, mono_mul(*q, dt.mono));
  }
  return {quot, rem};
}

bool expr_is_polynomial(const Expr& e) {
  for (const auto& t : e.terms()) {
    if (t.exp_arg || !t.sqrts.empty() || !mono_is_polynomial(t.mono))
      return false;
  }
  return true;
}

std::optional<Rat> rat_exact_sqrt(const Rat& c) {
  if (c < 0) return std::nullopt;
  mpz_class num = c.get_num(), den = c.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) &&
      mpz_perfect_square_p(den.get_mpz_t())) {
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return Rat(rn, rd);
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Normalization

Expr Expr::from_terms(std::vector<Term> input) {
  std::map<Term, Rat, TermKeyLess> acc;

  // Pass 1: expand sqrt exponents >= 3 (sqrt(R)^(2k+1) = R^k sqrt(R)) and
  // merge equal keys.
  std::vector<Term> work = std::move(input);
  while (!work.empty()) {
    Term t = std::move(work.back());
    work.pop_back();
    if (t.coeff == 0) continue;

    bool expanded = false;
    for (std::size_t i = 0; i < t.sqrts.size(); ++i) {
      if (t.sqrts[i].exp >= 3) {
        std::int32_t k = (t.sqrts[i].exp - 1) / 2;
        Expr factor = t.sqrts[i].radicand->pow(k);
        Term base = t;
        base.sqrts[i].exp = 1;
        Expr prod = Expr::from_terms({base}) * factor;
        for (const auto& wt : prod.terms()) work.push_back(wt);
        expanded = true;
        break;
      }
    }
    if (expanded) continue;

    auto it = acc.find(t);
    if (it == acc.end()) {
      Rat c = t.coeff;
      t.coeff = 1;
      acc.emplace(std::move(t), c);
    } else {
      it->second += t.coeff;
      if (it->second == 0) acc.erase(it);
    }
  }

  // Pass 2: reduce negative sqrt exponents by exact polynomial division of
  // the whole numerator group against the radicand.
  bool changed = true;
  while (changed) {
    changed = false;
    struct Group {
      ExprPtr exp_arg;
      std::vector<SqrtPow> sqrts;
      std::vector<PolyTerm> poly;
      bool polynomial = true;
    };
    std::vector<Group> groups;
    for (const auto& [key, coeff] : acc) {
      bool found = false;
      for (auto& g : groups) {
        if (cmp_expr_ptr(g.exp_arg, key.exp_arg) == 0 &&
            cmp_sqrts(g.sqrts, key.sqrts) == 0) {
          g.poly.push_back({coeff, key.mono});
          g.polynomial = g.polynomial && mono_is_polynomial(key.mono);
          found = true;
          break;
        }
      }
      if (!found) {
        Group g;
        g.exp_arg = key.exp_arg;
        g.sqrts = key.sqrts;
        g.poly.push_back({coeff, key.mono});
        g.polynomial = mono_is_polynomial(key.mono);
        groups.push_back(std::move(g));
      }
    }

    for (auto& g : groups) {
      if (!g.polynomial || changed) continue;
      for (std::size_t i = 0; i < g.sqrts.size() && !changed; ++i) {
        if (g.sqrts[i].exp > 0) continue;
        if (!expr_is_polynomial(*g.sqrts[i].radicand)) continue;
        std::vector<PolyTerm> divisor;
        for (const auto& rt : g.sqrts[i].radicand->terms())
          divisor.push_back({rt.coeff, rt.mono});
        auto [quot, rem] = poly_divide(g.poly, divisor);
        if (quot.empty()) continue;

        for (const auto& pt : g.poly) {
          Term key;
          key.coeff = 1;
          key.mono = pt.mono;
          key.exp_arg = g.exp_arg;
          key.sqrts = g.sqrts;
          acc.erase(key);
        }
        auto deposit = [&](const std::vector<PolyTerm>& poly,
                           std::int32_t new_exp) {
          for (const auto& pt : poly) {
            Term key;
            key.coeff = 1;
            key.mono = pt.mono;
            key.exp_arg = g.exp_arg;
            key.sqrts = g.sqrts;
            key.sqrts[i].exp = new_exp;
            auto it = acc.find(key);
            if (it == acc.end()) {
              acc.emplace(std::move(key), pt.coeff);
            } else {
              it->second += pt.coeff;
              if (it->second == 0) acc.erase(it);
            }
          }
        };
        deposit(quot, g.sqrts[i].exp + 2);  // odd + 2 stays odd
        deposit(rem, g.sqrts[i].exp);
        changed = true;
      }
    }
    // Exponents that became +1 may now merge with positive factors and the
    // key map already handled that; exponents >= 3 cannot arise here.
  }

  Expr out;
  out.terms_.reserve(acc.size());
  for (auto& [key, coeff] : acc) {
    Term t = key;
    t.coeff = coeff;
    out.terms_.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructors and arithmetic

Expr Expr::constant(const Rat& c) {
  Expr e;
  if (c != 0) {
    Term t;
    t.coeff = c;
    e.terms_.push_back(std::move(t));
  }
  return e;
}

Expr Expr::constant(long num, long den) { return constant(Rat(num, den)); }

Expr Expr::symbol(const std::string& name) { return symbol(Symbols::id(name)); }

Expr Expr::symbol(std::uint32_t id) {
  Term t;
  t.coeff = 1;
  t.mono.push_back({id, 1});
  Expr e;
  e.terms_.push_back(std::move(t));
  return e;
}

Expr operator+(const Expr& a, const Expr& b) {
  std::vector<Term> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return Expr::from_terms(std::move(terms));
}

Expr operator-(const Expr& a) {
  Expr e = a;
  for (auto& t : e.terms_) t.coeff = -t.coeff;
  return e;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

namespace {

// Product of two normalized terms. Equal radicands always combine to an even
// power (odd + odd), which folds back into the polynomial part.
std::vector<Term> term_mul(const Term& a, const Term& b) {
  Term t;
  t.coeff = a.coeff * b.coeff;
  t.mono = mono_mul(a.mono, b.mono);
  if (a.exp_arg && b.exp_arg) {
    Expr sum = *a.exp_arg + *b.exp_arg;
    t.exp_arg = sum.is_structurally_zero()
                    ? nullptr
                    : std::make_shared<const Expr>(std::move(sum));
  } else {
    t.exp_arg = a.exp_arg ? a.exp_arg : b.exp_arg;
  }

  std::vector<std::pair<ExprPtr, std::int32_t>> folds;  // radicand^k factors
  std::size_t i = 0, j = 0;
  while (i < a.sqrts.size() || j < b.sqrts.size()) {
    if (j == b.sqrts.size() ||
        (i < a.sqrts.size() &&
         cmp_expr_ptr(a.sqrts[i].radicand, b.sqrts[j].radicand) < 0)) {
      t.sqrts.push_back(a.sqrts[i++]);
    } else if (i == a.sqrts.size() ||
               cmp_expr_ptr(b.sqrts[j].radicand, a.sqrts[i].radicand) < 0) {
      t.sqrts.push_back(b.sqrts[j++]);
    } else {
      std::int32_t e = a.sqrts[i].exp + b.sqrts[j].exp;
      if (e != 0) folds.emplace_back(a.sqrts[i].radicand, e / 2);
      ++i;
      ++j;
    }
  }
  if (folds.empty()) return {t};
  Expr prod = Expr::from_terms({t});
  for (const auto& [rad, k] : folds) prod = prod * rad->pow(k);
  return prod.terms();
}

}  // namespace

Expr operator*(const Expr& a, const Expr& b) {
  std::vector<Term> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      auto prod = term_mul(ta, tb);
      terms.insert(terms.end(), prod.begin(), prod.end());
    }
  }
  return Expr::from_terms(std::move(terms));
}

Expr Expr::pow(std::int32_t n) const {
  if (n == 0) return constant(1);
  if (n < 0) {
    if (terms_.size() != 1)
      throw ExprError("negative power of a non-monomial expression");
    const Term& t = terms_[0];
    Term inv;
    inv.coeff = 1 / t.coeff;
    inv.mono = t.mono;
    for (auto& vp : inv.mono) vp.exp = -vp.exp;
    if (t.exp_arg)
      inv.exp_arg = std::make_shared<const Expr>(-*t.exp_arg);
    inv.sqrts = t.sqrts;
    for (auto& s : inv.sqrts) s.exp = -s.exp;
    return from_terms({inv}).pow(-n);
  }
  Expr result = constant(1);
  Expr base = *this;
  auto e = static_cast<std::uint32_t>(n);
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Expr exp(const Expr& a) {
  if (a.is_structurally_zero()) return Expr::constant(1);
  Term t;
  t.coeff = 1;
  t.exp_arg = std::make_shared<const Expr>(a);
  return Expr::from_terms({t});
}

Expr sqrt(const Expr& a) {
  if (a.is_structurally_zero()) return Expr::zero();
  if (auto c = a.as_constant()) {
    if (auto r = rat_exact_sqrt(*c)) return Expr::constant(*r);
  }
  // Extract a positive perfect-square rational content so that e.g.
  // sqrt(4+4m) and 2*sqrt(1+m) share one normal form.
  Rat content = a.terms()[0].coeff;
  if (content < 0) content = -content;
  if (content != 1) {
    if (auto root = rat_exact_sqrt(content)) {
      Expr scaled = Expr::constant(1 / content) * a;
      Term t;
      t.coeff = *root;
      t.sqrts.push_back({std::make_shared<const Expr>(std::move(scaled)), 1});
      return Expr::from_terms({t});
    }
  }
  Term t;
  t.coeff = 1;
  t.sqrts.push_back({std::make_shared<const Expr>(a), 1});
  return Expr::from_terms({t});
}

bool Expr::is_constant() const { return as_constant().has_value(); }

std::optional<Rat> Expr::as_constant() const {
  if (terms_.empty()) return Rat(0);
  if (terms_.size() == 1 && terms_[0].mono.empty() && !terms_[0].exp_arg &&
      terms_[0].sqrts.empty())
    return terms_[0].coeff;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Differentiation

Expr Expr::derivative(const std::string& var) const {
  return derivative(Symbols::id(var));
}

Expr Expr::derivative(std::uint32_t var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i].var != var) continue;
      Term d = t;
      d.coeff *= t.mono[i].exp;
      if (t.mono[i].exp == 1)
        d.mono.erase(d.mono.begin() + static_cast<std::ptrdiff_t>(i));
      else
        d.mono[i].exp -= 1;
      out.push_back(std::move(d));
    }
    if (t.exp_arg) {
      Expr darg = t.exp_arg->derivative(var);
      if (!darg.is_structurally_zero()) {
        Expr contrib = Expr::from_terms({t}) * darg;
        for (const auto& ct : contrib.terms()) out.push_back(ct);
      }
    }
    for (std::size_t i = 0; i < t.sqrts.size(); ++i) {
      Expr drad = t.sqrts[i].radicand->derivative(var);
      if (drad.is_structurally_zero()) continue;
      Term base = t;
      base.coeff *= Rat(t.sqrts[i].exp, 2);
      base.sqrts[i].exp -= 2;
      if (base.sqrts[i].exp == 0)
        base.sqrts.erase(base.sqrts.begin() + static_cast<std::ptrdiff_t>(i));
      Expr contrib = Expr::from_terms({base}) * drad;
      for (const auto& ct : contrib.terms()) out.push_back(ct);
    }
  }
  return from_terms(std::move(out));
}

// ---------------------------------------------------------------------------
// Substitution and evaluation

Expr Expr::substitute(const std::map<std::uint32_t, Expr>& bindings) const {
  Expr sum;
  for (const auto& t : terms_) {
    Expr prod = constant(t.coeff);
    for (const auto& vp : t.mono) {
      auto it = bindings.find(vp.var);
      Expr base = it != bindings.end() ? it->second : symbol(vp.var);
      prod = prod * base.pow(vp.exp);
    }
    if (t.exp_arg) prod = prod * sym::exp(t.exp_arg->substitute(bindings));
    for (const auto& s : t.sqrts)
      prod = prod * sym::sqrt(s.radicand->substitute(bindings)).pow(s.exp);
    sum = sum + prod;
  }
  return sum;
}

double Expr::evaluate(const std::map<std::uint32_t, double>& point) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff.get_d();
    for (const auto& vp : t.mono) {
      auto it = point.find(vp.var);
      if (it == point.end())
        throw ExprError("unbound symbol '" + Symbols::name(vp.var) +
                        "' in evaluation");
      if (it->second == 0.0 && vp.exp < 0)
        throw DomainError("zero raised to a negative power");
      v *= std::pow(it->second, vp.exp);
    }
    if (t.exp_arg) v *= std::exp(t.exp_arg->evaluate(point));
    for (const auto& s : t.sqrts) {
      double r = s.radicand->evaluate(point);
      if (r < 0) throw DomainError("square root of a negative value");
      if (r == 0 && s.exp < 0) throw DomainError("inverse square root of zero");
      v *= std::pow(std::sqrt(r), s.exp);
    }
    sum += v;
  }
  return sum;
}

std::vector<std::uint32_t> Expr::symbols() const {
  std::vector<std::uint32_t> out;
  auto add = [&out](std::uint32_t id) {
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  };
  for (const auto& t : terms_) {
    for (const auto& vp : t.mono) add(vp.var);
    if (t.exp_arg)
      for (auto id : t.exp_arg->symbols()) add(id);
    for (const auto& s : t.sqrts)
      for (auto id : s.radicand->symbols()) add(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ZeroTest Expr::zero_test(std::uint64_t seed) const {
  if (terms_.empty()) return {Zero::ExactZero, 0.0};

  auto vars = symbols();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> num_dist(-16, 16);
  std::uniform_int_distribution<int> den_dist(1, 7);

  constexpr int kWanted = 16;
  constexpr int kMaxAttempts = 600;
  int accepted = 0;
  double worst = 0.0;
  for (int attempt = 0; attempt < kMaxAttempts && accepted < kWanted;
       ++attempt) {
    std::map<std::uint32_t, double> point;
    for (auto v : vars) {
      int n = num_dist(rng);
      if (n == 0) n = 1;
      point[v] = static_cast<double>(n) / den_dist(rng);
    }
    double value;
    try {
      value = evaluate(point);
    } catch (const DomainError&) {
      continue;
    }
    ++accepted;
    worst = std::max(worst, std::abs(value));
    if (std::abs(value) > 1e-9) return {Zero::NonZero, std::abs(value)};
  }
  if (accepted < kWanted) return {Zero::Inconclusive, worst};
  return {Zero::ProbabilisticZero, worst};
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_rat(std::ostream& os, const Rat& r) {
  os << r.get_num().get_str();
  if (r.get_den() != 1) os << "/" << r.get_den().get_str();
}

void print_term_body(std::ostream& os, const Term& t, bool with_sign) {
  Rat abs_c = t.coeff < 0 ? Rat(-t.coeff) : t.coeff;
  if (with_sign && t.coeff < 0) os << "-";
  bool bare = t.mono.empty() && !t.exp_arg && t.sqrts.empty();
  bool printed = false;
  if (abs_c != 1 || bare) {
    print_rat(os, abs_c);
    printed = true;
  }
  for (const auto& vp : t.mono) {
    if (printed) os << "*";
    os << Symbols::name(vp.var);
    if (vp.exp != 1) os << "^" << vp.exp;
    printed = true;
  }
  if (t.exp_arg) {
    if (printed) os << "*";
    os << "exp(" << t.exp_arg->str() << ")";
    printed = true;
  }
  for (const auto& s : t.sqrts) {
    if (printed) os << "*";
    os << "sqrt(" << s.radicand->str() << ")";
    if (s.exp != 1) os << "^" << s.exp;
    printed = true;
  }
}

}  // namespace

std::string Expr::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i == 0) {
      print_term_body(os, terms_[i], true);
    } else {
      os << (terms_[i].coeff < 0 ? " - " : " + ");
      print_term_body(os, terms_[i], false);
    }
  }
  return os.str();
}

}  // namespace bilindblad::sym
