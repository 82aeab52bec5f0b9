#include "bilindblad/gksl.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace bilindblad::gksl {

namespace {

constexpr std::size_t kMaxDim = 64;

using EigenMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenMat> as_eigen(const CMatrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.dim()),
          static_cast<Eigen::Index>(m.dim())};
}

}  // namespace

GKSLGenerator::GKSLGenerator(double hbar_value, CMatrix hamiltonian,
                             std::vector<CMatrix> lindblad_ops)
    : hbar(hbar_value), H(std::move(hamiltonian)),
      lindblads(std::move(lindblad_ops)) {
  if (hbar <= 0) throw GKSLError("hbar must be positive");
  if (H.dim() == 0 || H.dim() > kMaxDim)
    throw GKSLError("Hilbert dimension out of range (1..64)");
  if (!H.is_hermitian(1e-12))
    throw GKSLError("Hamiltonian is not Hermitian within 1e-12");
  for (const auto& L : lindblads)
    if (L.dim() != H.dim()) throw GKSLError("Lindblad dimension mismatch");
}

CMatrix lindblad_apply(const GKSLGenerator& G, const CMatrix& rho) {
  if (rho.dim() != G.dim()) throw GKSLError("state dimension mismatch");
  CMatrix out = cplx(0.0, -1.0 / G.hbar) * la::commutator(G.H, rho);
  for (const auto& L : G.lindblads) {
    CMatrix Ld = L.adjoint();
    CMatrix LdL = Ld * L;
    out = out + L * rho * Ld - 0.5 * la::anticommutator(LdL, rho);
  }
  return out;
}

CMatrix heisenberg_apply(const GKSLGenerator& G, const CMatrix& A) {
  if (A.dim() != G.dim()) throw GKSLError("observable dimension mismatch");
  CMatrix out = cplx(0.0, 1.0 / G.hbar) * la::commutator(G.H, A);
  for (const auto& L : G.lindblads) {
    CMatrix Ld = L.adjoint();
    CMatrix LdL = Ld * L;
    out = out + Ld * A * L - 0.5 * la::anticommutator(LdL, A);
  }
  return out;
}

double adjoint_pairing_residual(const GKSLGenerator& G, const CMatrix& rho,
                                const CMatrix& A) {
  cplx lhs = (lindblad_apply(G, rho) * A).trace();
  cplx rhs = (rho * heisenberg_apply(G, A)).trace();
  return std::abs(lhs - rhs);
}

Superoperator to_superoperator(const GKSLGenerator& G, Picture picture) {
  const std::size_t d = G.dim();
  const CMatrix I = CMatrix::identity(d);
  // vec(A X B) = (B^T (x) A) vec(X) with column stacking.
  auto left = [&](const CMatrix& A) { return la::kron(I, A); };
  auto right = [&](const CMatrix& B) { return la::kron(B.transpose(), I); };

  CMatrix M(d * d);
  cplx ih = picture == Picture::Schrodinger ? cplx(0.0, -1.0 / G.hbar)
                                            : cplx(0.0, 1.0 / G.hbar);
  M = ih * (left(G.H) - right(G.H));
  for (const auto& L : G.lindblads) {
    CMatrix Ld = L.adjoint();
    CMatrix LdL = Ld * L;
    CMatrix sandwich = picture == Picture::Schrodinger
                           ? la::kron(L.conjugate(), L)
                           : la::kron(L.transpose(), Ld);
    M = M + sandwich - 0.5 * (left(LdL) + right(LdL));
  }
  return {std::move(M), picture, d};
}

namespace {

CMatrix apply_exp(const GKSLGenerator& G, const CMatrix& X0, double t,
                  Picture picture) {
  if (t < 0) throw GKSLError("negative evolution time");
  auto S = to_superoperator(G, picture);
  CMatrix E = la::matrix_exponential(t * S.matrix);
  auto v = la::vec(X0);
  std::vector<cplx> w(v.size(), cplx{});
  for (std::size_t i = 0; i < v.size(); ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j)
      acc += E(i, j) * v[j];
    w[i] = acc;
  }
  return la::unvec(w, X0.dim());
}

}  // namespace

CMatrix evolve(const GKSLGenerator& G, const CMatrix& rho0, double t) {
  return apply_exp(G, rho0, t, Picture::Schrodinger);
}

CMatrix evolve_heisenberg(const GKSLGenerator& G, const CMatrix& A0,
                          double t) {
  return apply_exp(G, A0, t, Picture::Heisenberg);
}

std::vector<CMatrix> kernel_of_adjoint(const GKSLGenerator& G, double tol) {
  if (tol <= 0) throw GKSLError("kernel tolerance must be positive");
  auto S = to_superoperator(G, Picture::Heisenberg);
  Eigen::JacobiSVD<EigenMat> svd(as_eigen(S.matrix), Eigen::ComputeFullV);
  std::vector<CMatrix> basis;
  const auto& sv = svd.singularValues();
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) >= tol) continue;
    std::vector<cplx> v(S.matrix.dim());
    for (Eigen::Index i = 0; i < svd.matrixV().rows(); ++i)
      v[static_cast<std::size_t>(i)] = svd.matrixV()(i, k);
    basis.push_back(la::unvec(v, G.dim()));
  }
  return basis;
}

bool commutant_membership(const GKSLGenerator& G, const CMatrix& O,
                          double tol) {
  double worst = la::commutator(G.H, O).op_norm();
  for (const auto& L : G.lindblads) {
    worst = std::max(worst, la::commutator(L, O).op_norm());
    worst = std::max(worst, la::commutator(L.adjoint(), O).op_norm());
  }
  if (worst >= tol) return false;
  double residual = heisenberg_apply(G, O).op_norm();
  if (residual >= 10 * tol)
    throw GKSLError("commutant membership without kernel membership");
  return true;
}

AlgebraReport invariant_algebra_check(const GKSLGenerator& G,
                                      const std::vector<CMatrix>& generators,
                                      double tol) {
  AlgebraReport rep;
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      rep.max_generator_commutator =
          std::max(rep.max_generator_commutator,
                   la::commutator(generators[i], generators[j]).op_norm());

  for (const auto& O : generators)
    rep.commutant_ok = rep.commutant_ok && commutant_membership(G, O);

  // Span of the unital algebra generated by the inputs, grown by products
  // until the dimension saturates.
  std::vector<CMatrix> basis;
  auto insert = [&basis](CMatrix m) {
    for (const auto& b : basis) m = m - la::hs_inner(b, m) * b;
    double norm = m.hs_norm();
    if (norm < 1e-12) return false;
    basis.push_back((1.0 / norm) * m);
    return true;
  };
  insert(CMatrix::identity(G.dim()));
  for (const auto& g : generators) insert(g);
  bool grew = true;
  while (grew) {
    grew = false;
    std::size_t count = basis.size();
    for (std::size_t i = 0; i < count && !grew; ++i)
      for (std::size_t j = 0; j < count && !grew; ++j)
        grew = insert(basis[i] * basis[j]);
  }
  rep.algebra_dim = basis.size();
  for (const auto& b : basis)
    rep.max_kernel_residual =
        std::max(rep.max_kernel_residual, heisenberg_apply(G, b).op_norm());

  rep.pass = rep.commutant_ok && rep.max_generator_commutator < tol * 100 &&
             rep.max_kernel_residual < tol * 100;
  return rep;
}

GKSLGenerator convex_combine(const GKSLGenerator& G0, const GKSLGenerator& G1,
                             double lam) {
  if (G0.dim() != G1.dim()) throw GKSLError("pencil legs differ in dimension");
  if (G0.hbar != G1.hbar) throw GKSLError("pencil legs differ in hbar");
  if (lam < 0 || lam > 1) throw GKSLError("lambda outside [0,1]");
  CMatrix H = (1.0 - lam) * G0.H + lam * G1.H;
  std::vector<CMatrix> Ls;
  if (lam < 1)
    for (const auto& L : G0.lindblads) Ls.push_back(std::sqrt(1.0 - lam) * L);
  if (lam > 0)
    for (const auto& L : G1.lindblads) Ls.push_back(std::sqrt(lam) * L);
  return GKSLGenerator(G0.hbar, std::move(H), std::move(Ls));
}

CMatrix choi_matrix(const CMatrix& superop_matrix, std::size_t d) {
  if (superop_matrix.dim() != d * d)
    throw GKSLError("superoperator size does not match Hilbert dimension");
  CMatrix C(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      // Phi(E_ij) is column j*d+i of the superoperator, unstacked.
      std::size_t col = j * d + i;
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t a = 0; a < d; ++a) {
          cplx val = superop_matrix(b * d + a, col);
          C(i * d + a, j * d + b) += val / static_cast<double>(d);
        }
    }
  }
  return C;
}

bool cp_check(const GKSLGenerator& G, double t, double tol) {
  auto S = to_superoperator(G, Picture::Schrodinger);
  CMatrix E = la::matrix_exponential(t * S.matrix);
  CMatrix C = choi_matrix(E, G.dim());
  return C.min_eigenvalue() >= -tol;
}

BiLindbladReport bilindblad_check(const GKSLGenerator& G0,
                                  const GKSLGenerator& G1,
                                  const std::vector<CMatrix>& integrals,
                                  const std::vector<double>& lambdas) {
  BiLindbladReport rep;
  rep.pass = true;
  for (double lam : lambdas) {
    GKSLGenerator G = convex_combine(G0, G1, lam);
    BiLindbladPoint pt{lam, true, 0.0};
    for (double t : {0.1, 1.0, 10.0})
      pt.cptp_ok = pt.cptp_ok && cp_check(G, t);
    for (const auto& I : integrals)
      pt.max_integral_residual = std::max(pt.max_integral_residual,
                                          heisenberg_apply(G, I).op_norm());
    rep.pass = rep.pass && pt.cptp_ok && pt.max_integral_residual < 1e-10;
    rep.points.push_back(pt);
  }
  return rep;
}

}  // namespace bilindblad::gksl
