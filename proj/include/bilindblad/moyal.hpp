#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "bilindblad/cmatrix.hpp"

namespace bilindblad::moyal {

using Rat = mpq_class;
using la::CMatrix;
using la::cplx;

struct MoyalError : la::MatrixError {
  using la::MatrixError::MatrixError;
};

/// Exact complex rational.
struct GaussRat {
  Rat re = 0, im = 0;
};

inline GaussRat operator+(const GaussRat& a, const GaussRat& b) {
  return {a.re + b.re, a.im + b.im};
}
inline GaussRat operator-(const GaussRat& a, const GaussRat& b) {
  return {a.re - b.re, a.im - b.im};
}
inline GaussRat operator*(const GaussRat& a, const GaussRat& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline GaussRat operator-(const GaussRat& a) { return {-a.re, -a.im}; }
inline bool operator==(const GaussRat& a, const GaussRat& b) {
  return a.re == b.re && a.im == b.im;
}
inline GaussRat conj(const GaussRat& a) { return {a.re, -a.im}; }
inline bool gr_is_zero(const GaussRat& a) { return a.re == 0 && a.im == 0; }

/// Polynomial in one pair of phase-space variables (x, xi) with coefficients
/// polynomial in hbar; everything exact.
class PhaseSymbol {
 public:
  // key = (x exponent, xi exponent, hbar exponent)
  using Key = std::array<int, 3>;

  PhaseSymbol() = default;
  static PhaseSymbol zero() { return {}; }
  static PhaseSymbol constant(const Rat& c);
  static PhaseSymbol x();
  static PhaseSymbol xi();
  static PhaseSymbol hbar();
  static PhaseSymbol monomial(int xe, int xie, int he, GaussRat c);

  friend PhaseSymbol operator+(const PhaseSymbol& a, const PhaseSymbol& b);
  friend PhaseSymbol operator-(const PhaseSymbol& a, const PhaseSymbol& b);
  friend PhaseSymbol operator*(const PhaseSymbol& a, const PhaseSymbol& b);
  PhaseSymbol operator-() const;
  PhaseSymbol& operator+=(const PhaseSymbol& b) { return *this = *this + b; }
  PhaseSymbol& operator-=(const PhaseSymbol& b) { return *this = *this - b; }

  PhaseSymbol scaled(const GaussRat& c) const;
  PhaseSymbol pow(int n) const;

  PhaseSymbol dx() const;   // d/dx
  PhaseSymbol dxi() const;  // d/dxi
  PhaseSymbol conjugated() const;

  bool is_zero() const { return coeffs_.empty(); }
  bool is_real() const;
  int degree() const;       // max x+xi exponent
  int hbar_degree() const;  // max hbar exponent
  int hbar_order_min() const;

  /// hbar-homogeneous part of the given order, with the hbar factor removed.
  PhaseSymbol hbar_part(int order) const;
  /// Exact division by (i hbar); throws when the hbar-order-0 part is
  /// nonzero.
  PhaseSymbol div_i_hbar() const;

  /// Coefficient of x^m xi^n with hbar evaluated numerically.
  cplx coefficient(int xe, int xie, double hbar_value) const;

  const std::map<Key, GaussRat>& coeffs() const { return coeffs_; }
  friend bool operator==(const PhaseSymbol& a, const PhaseSymbol& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string str() const;

 private:
  std::map<Key, GaussRat> coeffs_;
  void add(const Key& k, const GaussRat& c);
  friend PhaseSymbol poisson_bracket(const PhaseSymbol&, const PhaseSymbol&);
};

/// {a,b} = da/dx db/dxi - da/dxi db/dx (so {x,xi} = 1).
PhaseSymbol poisson_bracket(const PhaseSymbol& a, const PhaseSymbol& b);

/// Full terminating series sum_n (1/n!) (i hbar/2)^n P^n(a,b); satisfies
/// x*xi - xi*x = i hbar and exact associativity on polynomials.
PhaseSymbol star_product(const PhaseSymbol& a, const PhaseSymbol& b);

/// (a*b - b*a)/(i hbar), exact.
PhaseSymbol moyal_bracket(const PhaseSymbol& a, const PhaseSymbol& b);

/// moyal_bracket(a,b) - {a,b}; its hbar^0 and hbar^1 parts vanish
/// identically.
PhaseSymbol dirac_residual(const PhaseSymbol& a, const PhaseSymbol& b);

/// Order-0 and order-1 parts of conj(l)*f*l - 1/2(|l|^2*f + f*|l|^2) with
/// |l|^2 taken pointwise. The order-0 part is identically zero.
std::pair<PhaseSymbol, PhaseSymbol> dissipator_symbol_residual(
    const PhaseSymbol& l, const PhaseSymbol& f);

struct FockOperator {
  CMatrix matrix;
  std::size_t truncation;
  double hbar;
};

/// Weyl quantization on the truncated oscillator basis: monomials map to the
/// average over all orderings of X = sqrt(hbar/2)(A+A^+) and
/// P = i sqrt(hbar/2)(A^+-A) factors, computed on an enlarged ladder space
/// and compressed to the first N levels. Requires N >= degree+2.
class WeylQuantizer {
 public:
  WeylQuantizer(std::size_t truncation, double hbar_value);

  FockOperator quantize(const PhaseSymbol& a);
  CMatrix position() const { return compress(X_); }
  CMatrix momentum() const { return compress(P_); }

 private:
  std::size_t trunc_;
  std::size_t enlarged_;
  double hbar_;
  CMatrix X_, P_;  // on the enlarged space
  std::map<std::pair<int, int>, CMatrix> cache_;
  CMatrix weyl_monomial(int m, int n);
  CMatrix compress(const CMatrix& big) const;
};

FockOperator weyl_quantize(const PhaseSymbol& a, std::size_t truncation,
                           double hbar_value);

/// Zeroes the last `margin` rows and columns.
CMatrix interior_mask(const CMatrix& m, std::size_t margin);

/// || M_int( (1/i hbar)[Q(a),Q(b)] - Q({a,b}) ) ||.
double commutator_check(const PhaseSymbol& a, const PhaseSymbol& b,
                        std::size_t truncation, double hbar_value,
                        std::size_t margin);

struct EgorovModel {
  PhaseSymbol hamiltonian;
  PhaseSymbol observable;
  std::vector<std::pair<PhaseSymbol, double>> lindblads;  // (symbol, rate)
};

struct EgorovPoint {
  double hbar;
  double residual_norm;  // ||M_int(L^+(Q(f)) - Q({f,H}))||
  double f_norm;         // ||M_int Q(f)||
  double ratio;          // residual / max(1, f_norm)
};

struct EgorovSweep {
  std::vector<EgorovPoint> points;
  double slope;  // least-squares fit of log ratio vs log hbar
  bool slope_valid;
};

EgorovSweep egorov_sweep(const EgorovModel& model,
                         const std::vector<double>& hbars,
                         std::size_t truncation, std::size_t margin);

}  // namespace bilindblad::moyal
