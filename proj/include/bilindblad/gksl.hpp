#pragma once

#include <vector>

#include "bilindblad/cmatrix.hpp"

namespace bilindblad::gksl {

using la::cplx;
using la::CMatrix;

struct GKSLError : la::MatrixError {
  using la::MatrixError::MatrixError;
};

/// Generator data for d rho/dt = -(i/hbar)[H,rho] + sum_k (L rho L^+ -
/// 1/2 {L^+L, rho}). H must be Hermitian within 1e-12; dimension capped at 64.
struct GKSLGenerator {
  GKSLGenerator(double hbar_value, CMatrix hamiltonian,
                std::vector<CMatrix> lindblad_ops);

  std::size_t dim() const { return H.dim(); }

  double hbar;
  CMatrix H;
  std::vector<CMatrix> lindblads;
};

enum class Picture { Schrodinger, Heisenberg };

struct Superoperator {
  CMatrix matrix;  // acts on column-stacked matrices
  Picture picture;
  std::size_t hilbert_dim;
};

CMatrix lindblad_apply(const GKSLGenerator& G, const CMatrix& rho);
CMatrix heisenberg_apply(const GKSLGenerator& G, const CMatrix& A);

/// |Tr(L(rho) A) - Tr(rho L^+(A))|.
double adjoint_pairing_residual(const GKSLGenerator& G, const CMatrix& rho,
                                const CMatrix& A);

Superoperator to_superoperator(const GKSLGenerator& G, Picture picture);

/// e^{tL}(rho0); t >= 0.
CMatrix evolve(const GKSLGenerator& G, const CMatrix& rho0, double t);
/// e^{tL^+}(A0); t >= 0.
CMatrix evolve_heisenberg(const GKSLGenerator& G, const CMatrix& A0, double t);

/// Orthonormal (Hilbert-Schmidt) basis of ker L^+ from singular values below
/// tol.
std::vector<CMatrix> kernel_of_adjoint(const GKSLGenerator& G,
                                       double tol = 1e-9);

/// True iff O commutes with H, every L_k and every L_k^+ within tol. When
/// true, ||L^+(O)|| < 10 tol is asserted.
bool commutant_membership(const GKSLGenerator& G, const CMatrix& O,
                          double tol = 1e-9);

struct AlgebraReport {
  std::size_t algebra_dim = 0;
  double max_generator_commutator = 0.0;  // pairwise, operator norm
  bool commutant_ok = true;
  double max_kernel_residual = 0.0;  // ||L^+|| over an algebra basis
  bool pass = false;
};

/// Commutation of the generators, commutant membership, and pointwise
/// vanishing of L^+ on the unital algebra they generate (span saturation).
AlgebraReport invariant_algebra_check(const GKSLGenerator& G,
                                      const std::vector<CMatrix>& generators,
                                      double tol = 1e-10);

/// Hamiltonian (1-lam) H0 + lam H1; Lindblad lists scaled by sqrt(1-lam) and
/// sqrt(lam). Requires equal dims and hbar.
GKSLGenerator convex_combine(const GKSLGenerator& G0, const GKSLGenerator& G1,
                             double lam);

/// Choi matrix (1/d) sum_ij E_ij (x) Phi(E_ij) of the map encoded by a
/// Schrodinger-picture superoperator matrix (typically e^{tM}).
CMatrix choi_matrix(const CMatrix& superop_matrix, std::size_t hilbert_dim);

/// Complete positivity of e^{tL} through its Choi spectrum.
bool cp_check(const GKSLGenerator& G, double t, double tol = 1e-10);

struct BiLindbladPoint {
  double lambda;
  bool cptp_ok;
  double max_integral_residual;  // max_j ||L^(lam)+ (I_j)||
};

struct BiLindbladReport {
  std::vector<BiLindbladPoint> points;
  bool pass = false;
};

/// For each lambda: convex-combines, checks CP at t in {0.1, 1, 10} and
/// that every integral is annihilated by the Heisenberg adjoint (1e-10).
BiLindbladReport bilindblad_check(const GKSLGenerator& G0,
                                  const GKSLGenerator& G1,
                                  const std::vector<CMatrix>& integrals,
                                  const std::vector<double>& lambdas);

}  // namespace bilindblad::gksl
