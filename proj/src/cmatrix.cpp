#include "bilindblad/cmatrix.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace bilindblad::la {

namespace {

using EigenMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenMat> as_eigen(const CMatrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.dim()),
          static_cast<Eigen::Index>(m.dim())};
}

CMatrix from_eigen(const EigenMat& e) {
  CMatrix out(static_cast<std::size_t>(e.rows()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
  return out;
}

}  // namespace

void CMatrix::check_same(const CMatrix& other) const {
  if (n_ != other.n_) throw MatrixError("matrix dimension mismatch");
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diag(const std::vector<cplx>& d) {
  CMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix operator+(const CMatrix& x, const CMatrix& y) {
  x.check_same(y);
  CMatrix out(x.n_);
  kernels::axpby(1.0, x.data(), 1.0, y.data(), out.data(), x.n_ * x.n_);
  return out;
}

CMatrix operator-(const CMatrix& x, const CMatrix& y) {
  x.check_same(y);
  CMatrix out(x.n_);
  kernels::axpby(1.0, x.data(), -1.0, y.data(), out.data(), x.n_ * x.n_);
  return out;
}

CMatrix operator*(const CMatrix& x, const CMatrix& y) {
  x.check_same(y);
  CMatrix out(x.n_);
  kernels::matmul(x.data(), y.data(), out.data(), x.n_);
  return out;
}

CMatrix operator*(cplx s, const CMatrix& x) {
  CMatrix out(x.n_);
  kernels::axpby(s, x.data(), 0.0, x.data(), out.data(), x.n_ * x.n_);
  return out;
}

CMatrix operator*(double s, const CMatrix& x) { return cplx(s, 0.0) * x; }

CMatrix CMatrix::adjoint() const {
  CMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      out(i, j) = std::conj((*this)(j, i));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out(i, j) = (*this)(j, i);
  return out;
}

CMatrix CMatrix::conjugate() const {
  CMatrix out(n_);
  for (std::size_t i = 0; i < n_ * n_; ++i) out.a_[i] = std::conj(a_[i]);
  return out;
}

cplx CMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double CMatrix::hs_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double CMatrix::one_norm() const {
  double best = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n_; ++i) col += std::abs((*this)(i, j));
    best = std::max(best, col);
  }
  return best;
}

double CMatrix::op_norm() const {
  if (n_ == 0) return 0.0;
  Eigen::JacobiSVD<EigenMat> svd(as_eigen(*this));
  return svd.singularValues()(0);
}

bool CMatrix::is_hermitian(double tol) const {
  return (*this - adjoint()).max_abs() <= tol;
}

bool CMatrix::is_unitary(double tol) const {
  return ((*this) * adjoint() - identity(n_)).max_abs() <= tol;
}

bool CMatrix::is_positive_semidefinite(double tol) const {
  return min_eigenvalue() >= -tol;
}

double CMatrix::min_eigenvalue() const {
  auto evs = hermitian_eigenvalues();
  return evs.empty() ? 0.0 : evs.front();
}

std::vector<double> CMatrix::hermitian_eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<EigenMat> es(as_eigen(*this),
                                             Eigen::EigenvaluesOnly);
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    out[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
  return out;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  return a * b - b * a;
}

CMatrix anticommutator(const CMatrix& a, const CMatrix& b) {
  return a * b + b * a;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.dim() * b.dim());
  kernels::kron(a.data(), a.dim(), b.data(), b.dim(), out.data());
  return out;
}

cplx hs_inner(const CMatrix& a, const CMatrix& b) {
  a.check_same(b);
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dim() * a.dim(); ++i)
    s += std::conj(a.data()[i]) * b.data()[i];
  return s;
}

std::vector<cplx> vec(const CMatrix& x) {
  std::vector<cplx> v(x.dim() * x.dim());
  for (std::size_t j = 0; j < x.dim(); ++j)
    for (std::size_t i = 0; i < x.dim(); ++i) v[j * x.dim() + i] = x(i, j);
  return v;
}

CMatrix unvec(const std::vector<cplx>& v, std::size_t n) {
  if (v.size() != n * n) throw MatrixError("unvec size mismatch");
  CMatrix x(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) x(i, j) = v[j * n + i];
  return x;
}

// ---------------------------------------------------------------------------
// Matrix exponential, Higham's scaling-and-squaring with Pade order 13.

namespace {

const double kPade13Theta = 5.371920351148152;

const double kPade13Coeffs[] = {64764752532480000.0,
                                32382376266240000.0,
                                7771770303897600.0,
                                1187353796428800.0,
                                129060195264000.0,
                                10559470521600.0,
                                670442572800.0,
                                33522128640.0,
                                1323241920.0,
                                40840800.0,
                                960960.0,
                                16380.0,
                                182.0,
                                1.0};

}  // namespace

CMatrix matrix_exponential(const CMatrix& a) {
  const std::size_t n = a.dim();
  if (n == 0) return a;
  if (n * n > 4096 * 4096)
    throw MatrixError("matrix exponential dimension cap exceeded");

  double norm = a.one_norm();
  int squarings = 0;
  if (norm > kPade13Theta) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kPade13Theta)));
  }
  double scale = std::ldexp(1.0, -squarings);
  CMatrix A = scale * a;

  const double* b = kPade13Coeffs;
  CMatrix I = CMatrix::identity(n);
  CMatrix A2 = A * A;
  CMatrix A4 = A2 * A2;
  CMatrix A6 = A2 * A4;

  // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
  CMatrix W1 = b[13] * A6 + b[11] * A4 + b[9] * A2;
  CMatrix W2 = b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I;
  CMatrix U = A * (A6 * W1 + W2);
  // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
  CMatrix Z1 = b[12] * A6 + b[10] * A4 + b[8] * A2;
  CMatrix Z2 = b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  CMatrix V = A6 * Z1 + Z2;

  // Solve (V - U) F = (V + U).
  EigenMat lhs = as_eigen(V - U);
  EigenMat rhs = as_eigen(V + U);
  EigenMat F = lhs.partialPivLu().solve(rhs);
  CMatrix R = from_eigen(F);
  for (int s = 0; s < squarings; ++s) R = R * R;
  return R;
}

// ---------------------------------------------------------------------------
// Deterministic random fixtures

CMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

CMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  CMatrix g = random_matrix(rng, n);
  return 0.5 * (g + g.adjoint());
}

CMatrix random_density(std::mt19937_64& rng, std::size_t n) {
  CMatrix g = random_matrix(rng, n);
  CMatrix rho = g * g.adjoint();
  cplx t = rho.trace();
  return (1.0 / t.real()) * rho;
}

CMatrix sigma_x() {
  CMatrix m(2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

CMatrix sigma_y() {
  CMatrix m(2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}

CMatrix sigma_z() {
  CMatrix m(2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

}  // namespace bilindblad::la
