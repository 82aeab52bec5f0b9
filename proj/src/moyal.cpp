#include "bilindblad/moyal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bilindblad/gksl.hpp"

namespace bilindblad::moyal {

// ---------------------------------------------------------------------------
// PhaseSymbol

void PhaseSymbol::add(const Key& k, const GaussRat& c) {
  if (gr_is_zero(c)) return;
  auto it = coeffs_.find(k);
  if (it == coeffs_.end()) {
    coeffs_.emplace(k, c);
  } else {
    it->second = it->second + c;
    if (gr_is_zero(it->second)) coeffs_.erase(it);
  }
}

PhaseSymbol PhaseSymbol::constant(const Rat& c) {
  PhaseSymbol s;
  s.add({0, 0, 0}, {c, 0});
  return s;
}

PhaseSymbol PhaseSymbol::x() { return monomial(1, 0, 0, {1, 0}); }
PhaseSymbol PhaseSymbol::xi() { return monomial(0, 1, 0, {1, 0}); }
PhaseSymbol PhaseSymbol::hbar() { return monomial(0, 0, 1, {1, 0}); }

PhaseSymbol PhaseSymbol::monomial(int xe, int xie, int he, GaussRat c) {
  if (xe < 0 || xie < 0 || he < 0)
    throw MoyalError("negative exponent in phase-space monomial");
  PhaseSymbol s;
  s.add({xe, xie, he}, c);
  return s;
}

PhaseSymbol operator+(const PhaseSymbol& a, const PhaseSymbol& b) {
  PhaseSymbol out = a;
  for (const auto& [k, c] : b.coeffs()) out.add(k, c);
  return out;
}

PhaseSymbol operator-(const PhaseSymbol& a, const PhaseSymbol& b) {
  PhaseSymbol out = a;
  for (const auto& [k, c] : b.coeffs()) out.add(k, -c);
  return out;
}

PhaseSymbol PhaseSymbol::operator-() const {
  PhaseSymbol out;
  for (const auto& [k, c] : coeffs_) out.add(k, -c);
  return out;
}

PhaseSymbol operator*(const PhaseSymbol& a, const PhaseSymbol& b) {
  PhaseSymbol out;
  for (const auto& [ka, ca] : a.coeffs())
    for (const auto& [kb, cb] : b.coeffs())
      out.add({ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}, ca * cb);
  return out;
}

PhaseSymbol PhaseSymbol::scaled(const GaussRat& c) const {
  PhaseSymbol out;
  for (const auto& [k, v] : coeffs_) out.add(k, v * c);
  return out;
}

PhaseSymbol PhaseSymbol::pow(int n) const {
  if (n < 0) throw MoyalError("negative symbol power");
  PhaseSymbol out = constant(1);
  for (int i = 0; i < n; ++i) out = out * *this;
  return out;
}

PhaseSymbol PhaseSymbol::dx() const {
  PhaseSymbol out;
  for (const auto& [k, c] : coeffs_) {
    if (k[0] == 0) continue;
    out.add({k[0] - 1, k[1], k[2]}, c * GaussRat{Rat(k[0]), 0});
  }
  return out;
}

PhaseSymbol PhaseSymbol::dxi() const {
  PhaseSymbol out;
  for (const auto& [k, c] : coeffs_) {
    if (k[1] == 0) continue;
    out.add({k[0], k[1] - 1, k[2]}, c * GaussRat{Rat(k[1]), 0});
  }
  return out;
}

PhaseSymbol PhaseSymbol::conjugated() const {
  PhaseSymbol out;
  for (const auto& [k, c] : coeffs_) out.add(k, conj(c));
  return out;
}

bool PhaseSymbol::is_real() const {
  for (const auto& [k, c] : coeffs_)
    if (c.im != 0) return false;
  return true;
}

int PhaseSymbol::degree() const {
  int d = 0;
  for (const auto& [k, c] : coeffs_) d = std::max(d, k[0] + k[1]);
  return d;
}

int PhaseSymbol::hbar_degree() const {
  int d = 0;
  for (const auto& [k, c] : coeffs_) d = std::max(d, k[2]);
  return d;
}

int PhaseSymbol::hbar_order_min() const {
  int d = INT32_MAX;
  for (const auto& [k, c] : coeffs_) d = std::min(d, k[2]);
  return coeffs_.empty() ? 0 : d;
}

PhaseSymbol PhaseSymbol::hbar_part(int order) const {
  PhaseSymbol out;
  for (const auto& [k, c] : coeffs_)
    if (k[2] == order) out.add({k[0], k[1], 0}, c);
  return out;
}

PhaseSymbol PhaseSymbol::div_i_hbar() const {
  PhaseSymbol out;
  for (const auto& [k, c] : coeffs_) {
    if (k[2] == 0)
      throw MoyalError("division by i*hbar of an hbar-order-0 term");
    // 1/i = -i.
    out.add({k[0], k[1], k[2] - 1}, c * GaussRat{0, Rat(-1)});
  }
  return out;
}

cplx PhaseSymbol::coefficient(int xe, int xie, double hbar_value) const {
  cplx acc = 0.0;
  for (const auto& [k, c] : coeffs_) {
    if (k[0] != xe || k[1] != xie) continue;
    acc += cplx(c.re.get_d(), c.im.get_d()) * std::pow(hbar_value, k[2]);
  }
  return acc;
}

std::string PhaseSymbol::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : coeffs_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.re.get_str();
    if (c.im != 0) os << (c.im < 0 ? "" : "+") << c.im.get_str() << "i";
    os << ")";
    if (k[0]) os << "*x^" << k[0];
    if (k[1]) os << "*xi^" << k[1];
    if (k[2]) os << "*hbar^" << k[2];
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Star product and brackets

PhaseSymbol poisson_bracket(const PhaseSymbol& a, const PhaseSymbol& b) {
  return a.dx() * b.dxi() - a.dxi() * b.dx();
}

namespace {

// P^n(a,b) = sum_k (-1)^k C(n,k) (dx^{n-k} dxi^k a)(dx^k dxi^{n-k} b).
PhaseSymbol bidifferential(const PhaseSymbol& a, const PhaseSymbol& b,
                           int n) {
  PhaseSymbol out;
  Rat binom = 1;
  for (int k = 0; k <= n; ++k) {
    PhaseSymbol da = a, db = b;
    for (int i = 0; i < n - k; ++i) da = da.dx();
    for (int i = 0; i < k; ++i) da = da.dxi();
    for (int i = 0; i < k; ++i) db = db.dx();
    for (int i = 0; i < n - k; ++i) db = db.dxi();
    GaussRat sign{(k % 2 == 0) ? binom : -binom, 0};
    out += (da * db).scaled(sign);
    binom = binom * Rat(n - k) / Rat(k + 1);
  }
  return out;
}

}  // namespace

PhaseSymbol star_product(const PhaseSymbol& a, const PhaseSymbol& b) {
  int nmax = std::min(a.degree(), b.degree());
  PhaseSymbol out;
  // (i hbar / 2)^n / n! as an exact Gaussian rational times hbar^n.
  GaussRat coeff{1, 0};
  for (int n = 0; n <= nmax; ++n) {
    if (n > 0) {
      coeff = coeff * GaussRat{0, Rat(1, 2)};  // * i/2
      coeff = GaussRat{coeff.re / n, coeff.im / n};
    }
    PhaseSymbol term = bidifferential(a, b, n).scaled(coeff);
    out += term * PhaseSymbol::monomial(0, 0, n, {1, 0});
  }
  return out;
}

PhaseSymbol moyal_bracket(const PhaseSymbol& a, const PhaseSymbol& b) {
  return (star_product(a, b) - star_product(b, a)).div_i_hbar();
}

PhaseSymbol dirac_residual(const PhaseSymbol& a, const PhaseSymbol& b) {
  return moyal_bracket(a, b) - poisson_bracket(a, b);
}

std::pair<PhaseSymbol, PhaseSymbol> dissipator_symbol_residual(
    const PhaseSymbol& l, const PhaseSymbol& f) {
  PhaseSymbol lbar = l.conjugated();
  PhaseSymbol mod2 = lbar * l;  // pointwise |l|^2
  PhaseSymbol d = star_product(star_product(lbar, f), l) -
                  (star_product(mod2, f) + star_product(f, mod2))
                      .scaled({Rat(1, 2), 0});
  return {d.hbar_part(0), d.hbar_part(1)};
}

// ---------------------------------------------------------------------------
// Weyl quantization on the truncated oscillator ladder

namespace {

void build_ladder(std::size_t n, double hbar, CMatrix& X, CMatrix& P) {
  CMatrix A(n);
  for (std::size_t k = 1; k < n; ++k)
    A(k - 1, k) = std::sqrt(static_cast<double>(k));
  CMatrix Ad = A.adjoint();
  double s = std::sqrt(hbar / 2.0);
  X = s * (A + Ad);
  P = cplx(0.0, s) * (Ad - A);
}

}  // namespace

WeylQuantizer::WeylQuantizer(std::size_t truncation, double hbar_value)
    : trunc_(truncation), enlarged_(truncation), hbar_(hbar_value) {
  if (truncation < 2) throw MoyalError("truncation too small");
  if (hbar_value <= 0) throw MoyalError("hbar must be positive");
  build_ladder(enlarged_, hbar_, X_, P_);
}

CMatrix WeylQuantizer::compress(const CMatrix& big) const {
  CMatrix out(trunc_);
  for (std::size_t i = 0; i < trunc_; ++i)
    for (std::size_t j = 0; j < trunc_; ++j) out(i, j) = big(i, j);
  return out;
}

CMatrix WeylQuantizer::weyl_monomial(int m, int n) {
  auto it = cache_.find({m, n});
  if (it != cache_.end()) return it->second;

  // Average over all orderings of m X factors and n P factors.
  std::vector<int> pattern(static_cast<std::size_t>(m), 0);
  pattern.insert(pattern.end(), static_cast<std::size_t>(n), 1);
  std::sort(pattern.begin(), pattern.end());
  CMatrix acc(enlarged_);
  std::size_t count = 0;
  do {
    CMatrix prod = CMatrix::identity(enlarged_);
    for (int bit : pattern) prod = prod * (bit == 0 ? X_ : P_);
    acc = acc + prod;
    ++count;
  } while (std::next_permutation(pattern.begin(), pattern.end()));
  CMatrix avg = (1.0 / static_cast<double>(count)) * acc;
  cache_.emplace(std::make_pair(m, n), avg);
  return avg;
}

FockOperator WeylQuantizer::quantize(const PhaseSymbol& a) {
  int deg = a.degree();
  if (trunc_ < static_cast<std::size_t>(deg) + 2)
    throw MoyalError("truncation below symbol degree + 2");

  // The compression of a degree-d band operator onto the first N levels only
  // sees intermediate states up to N-1+d, so this enlargement is exact.
  std::size_t wanted = trunc_ + static_cast<std::size_t>(deg);
  if (enlarged_ < wanted) {
    enlarged_ = wanted;
    cache_.clear();
    build_ladder(enlarged_, hbar_, X_, P_);
  }

  CMatrix big(enlarged_);
  std::map<std::pair<int, int>, cplx> numeric;
  for (const auto& [k, c] : a.coeffs()) {
    cplx w = cplx(c.re.get_d(), c.im.get_d()) * std::pow(hbar_, k[2]);
    numeric[{k[0], k[1]}] += w;
  }
  for (const auto& [mn, w] : numeric) {
    if (w == cplx{}) continue;
    big = big + w * weyl_monomial(mn.first, mn.second);
  }
  return {compress(big), trunc_, hbar_};
}

FockOperator weyl_quantize(const PhaseSymbol& a, std::size_t truncation,
                           double hbar_value) {
  WeylQuantizer q(truncation, hbar_value);
  return q.quantize(a);
}

CMatrix interior_mask(const CMatrix& m, std::size_t margin) {
  if (margin >= m.dim()) return CMatrix::zero(m.dim());
  CMatrix out = m;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (i >= m.dim() - margin || j >= m.dim() - margin) out(i, j) = 0.0;
  return out;
}

double commutator_check(const PhaseSymbol& a, const PhaseSymbol& b,
                        std::size_t truncation, double hbar_value,
                        std::size_t margin) {
  WeylQuantizer q(truncation, hbar_value);
  CMatrix Qa = q.quantize(a).matrix;
  CMatrix Qb = q.quantize(b).matrix;
  CMatrix Qpb = q.quantize(poisson_bracket(a, b)).matrix;
  CMatrix diff =
      cplx(0.0, -1.0 / hbar_value) * la::commutator(Qa, Qb) - Qpb;
  return interior_mask(diff, margin).op_norm();
}

EgorovSweep egorov_sweep(const EgorovModel& model,
                         const std::vector<double>& hbars,
                         std::size_t truncation, std::size_t margin) {
  EgorovSweep sweep;
  sweep.points.resize(hbars.size());

  PhaseSymbol transported =
      poisson_bracket(model.observable, model.hamiltonian);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t idx = 0; idx < hbars.size(); ++idx) {
    double hb = hbars[idx];
    WeylQuantizer q(truncation, hb);
    CMatrix H = q.quantize(model.hamiltonian).matrix;
    std::vector<CMatrix> Ls;
    for (const auto& [lsym, rate] : model.lindblads)
      Ls.push_back(std::sqrt(rate) * q.quantize(lsym).matrix);
    gksl::GKSLGenerator G(hb, H, Ls);

    CMatrix Qf = q.quantize(model.observable).matrix;
    CMatrix Qt = q.quantize(transported).matrix;
    CMatrix R = gksl::heisenberg_apply(G, Qf) - Qt;

    EgorovPoint pt;
    pt.hbar = hb;
    pt.residual_norm = interior_mask(R, margin).op_norm();
    pt.f_norm = interior_mask(Qf, margin).op_norm();
    pt.ratio = pt.residual_norm / std::max(1.0, pt.f_norm);
    sweep.points[idx] = pt;
  }

  // Least-squares slope of log(ratio) against log(hbar).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  sweep.slope_valid = true;
  for (const auto& pt : sweep.points) {
    if (pt.ratio <= 1e-13) {
      sweep.slope_valid = false;
      continue;
    }
    double lx = std::log(pt.hbar), ly = std::log(pt.ratio);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  sweep.slope = (n >= 2) ? (static_cast<double>(n) * sxy - sx * sy) /
                               (static_cast<double>(n) * sxx - sx * sx)
                         : 0.0;
  sweep.slope_valid = sweep.slope_valid && n >= 2;
  return sweep;
}

}  // namespace bilindblad::moyal
