#pragma once

#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "bilindblad/kernels.hpp"

namespace bilindblad::la {

using cplx = std::complex<double>;

struct MatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense square complex matrix, row-major, immutable-by-convention value
/// type. Hilbert-space dimension is capped at 64 by the generator layer; the
/// superoperator layer works with the squared sizes.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t n) : n_(n), a_(n * n) {}
  static CMatrix identity(std::size_t n);
  static CMatrix zero(std::size_t n) { return CMatrix(n); }
  static CMatrix diag(const std::vector<cplx>& d);

  std::size_t dim() const { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return a_[i * n_ + j];
  }
  const cplx* data() const { return a_.data(); }
  cplx* data() { return a_.data(); }

  friend CMatrix operator+(const CMatrix& x, const CMatrix& y);
  friend CMatrix operator-(const CMatrix& x, const CMatrix& y);
  friend CMatrix operator*(const CMatrix& x, const CMatrix& y);
  friend CMatrix operator*(cplx s, const CMatrix& x);
  friend CMatrix operator*(double s, const CMatrix& x);
  CMatrix operator-() const { return cplx(-1.0) * *this; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conjugate() const;
  cplx trace() const;

  double max_abs() const;
  double hs_norm() const;   // Frobenius
  double op_norm() const;   // largest singular value
  double one_norm() const;  // max column sum

  bool is_hermitian(double tol = 1e-10) const;
  bool is_unitary(double tol = 1e-10) const;
  /// Hermitian positive semidefiniteness within tol (min eigenvalue >= -tol).
  bool is_positive_semidefinite(double tol = 1e-10) const;
  double min_eigenvalue() const;  // Hermitian part assumed

  /// Eigenvalues of a Hermitian matrix, ascending.
  std::vector<double> hermitian_eigenvalues() const;

  void check_same(const CMatrix& other) const;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

CMatrix commutator(const CMatrix& a, const CMatrix& b);
CMatrix anticommutator(const CMatrix& a, const CMatrix& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
cplx hs_inner(const CMatrix& a, const CMatrix& b);  // Tr(a^dagger b)

/// Column-stacked vectorization; vec(A X B) = (B^T (x) A) vec(X).
std::vector<cplx> vec(const CMatrix& x);
CMatrix unvec(const std::vector<cplx>& v, std::size_t n);

/// e^A by scaling-and-squaring with the order-13 Pade approximant
/// (backward-error bound ~1e-16 per the standard theta table).
CMatrix matrix_exponential(const CMatrix& a);

// Deterministic pseudo-random fixtures.
CMatrix random_matrix(std::mt19937_64& rng, std::size_t n);
CMatrix random_hermitian(std::mt19937_64& rng, std::size_t n);
CMatrix random_density(std::mt19937_64& rng, std::size_t n);

// Pauli matrices.
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();

}  // namespace bilindblad::la
