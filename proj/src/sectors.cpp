#include "bilindblad/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace bilindblad::gksl {

namespace {

constexpr double kClusterGap = 1e-8;

using EigenMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenMat> as_eigen(const CMatrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.dim()),
          static_cast<Eigen::Index>(m.dim())};
}

// A block is an isometry d x k whose columns span a joint eigenspace
// candidate, together with the eigenvalue tuple collected so far.
struct Block {
  EigenMat basis;  // d x k
  std::vector<double> nu;
};

cplx sector_eigenvalue(const CMatrix& O, const Sector& s) {
  return (s.projector * O).trace() / static_cast<double>(s.multiplicity);
}

}  // namespace

bool sector_scalar(const CMatrix& O, const SectorDecomposition& sectors,
                   double tol) {
  for (const auto& s : sectors.sectors) {
    cplx l = sector_eigenvalue(O, s);
    if ((O * s.projector - l * s.projector).op_norm() >= tol) return false;
  }
  return true;
}

SectorDecomposition joint_sectors(const std::vector<CMatrix>& observables,
                                  double commute_tol) {
  if (observables.empty())
    throw GKSLError("joint_sectors needs at least one observable");
  const std::size_t d = observables[0].dim();
  for (const auto& O : observables) {
    if (O.dim() != d) throw GKSLError("observable dimension mismatch");
    if (!O.is_hermitian(1e-10))
      throw GKSLError("observable is not Hermitian within 1e-10");
  }
  for (std::size_t i = 0; i < observables.size(); ++i)
    for (std::size_t j = i + 1; j < observables.size(); ++j) {
      double norm = la::commutator(observables[i], observables[j]).op_norm();
      if (norm >= commute_tol)
        throw GKSLError("observables " + std::to_string(i) + " and " +
                        std::to_string(j) + " do not commute (norm " +
                        std::to_string(norm) + ")");
    }

  std::vector<Block> blocks(1);
  blocks[0].basis = EigenMat::Identity(static_cast<Eigen::Index>(d),
                                       static_cast<Eigen::Index>(d));

  for (const auto& O : observables) {
    std::vector<Block> next;
    for (auto& blk : blocks) {
      EigenMat compressed = blk.basis.adjoint() * as_eigen(O) * blk.basis;
      Eigen::SelfAdjointEigenSolver<EigenMat> es(compressed);
      const auto& ev = es.eigenvalues();
      // Cluster ascending eigenvalues by the declared gap.
      Eigen::Index k = ev.size();
      Eigen::Index start = 0;
      while (start < k) {
        Eigen::Index stop = start + 1;
        while (stop < k && ev(stop) - ev(stop - 1) < kClusterGap) ++stop;
        double value = 0.0;
        for (Eigen::Index i = start; i < stop; ++i) value += ev(i);
        value /= static_cast<double>(stop - start);
        Block sub;
        sub.basis = blk.basis * es.eigenvectors().middleCols(start, stop - start);
        sub.nu = blk.nu;
        sub.nu.push_back(value);
        next.push_back(std::move(sub));
        start = stop;
      }
    }
    blocks = std::move(next);
  }

  SectorDecomposition out;
  out.dim = d;
  for (const auto& blk : blocks) {
    Sector s;
    s.nu = blk.nu;
    s.multiplicity = static_cast<std::size_t>(blk.basis.cols());
    EigenMat proj = blk.basis * blk.basis.adjoint();
    CMatrix P(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        P(i, j) = proj(static_cast<Eigen::Index>(i),
                       static_cast<Eigen::Index>(j));
    s.projector = std::move(P);
    out.sectors.push_back(std::move(s));
  }
  std::sort(out.sectors.begin(), out.sectors.end(),
            [](const Sector& a, const Sector& b) { return a.nu < b.nu; });
  return out;
}

std::vector<std::vector<double>> dephasing_rates(
    const GKSLGenerator& G, const SectorDecomposition& sectors) {
  const std::size_t m = sectors.sectors.size();
  // Scalar action of every channel on every sector.
  std::vector<std::vector<cplx>> ell(G.lindblads.size(),
                                     std::vector<cplx>(m));
  for (std::size_t k = 0; k < G.lindblads.size(); ++k) {
    for (std::size_t v = 0; v < m; ++v) {
      const Sector& s = sectors.sectors[v];
      cplx l = (G.lindblads[k] * s.projector).trace() /
               static_cast<double>(s.multiplicity);
      double err =
          (G.lindblads[k] * s.projector - l * s.projector).op_norm();
      if (err >= 1e-9)
        throw GKSLError("Lindblad operator " + std::to_string(k) +
                        " is not scalar on sector " + std::to_string(v) +
                        " (residual " + std::to_string(err) + ")");
      ell[k][v] = l;
    }
  }
  std::vector<std::vector<double>> rate(m, std::vector<double>(m, 0.0));
  for (std::size_t v = 0; v < m; ++v)
    for (std::size_t u = 0; u < m; ++u) {
      if (u == v) continue;
      double sum = 0.0;
      for (std::size_t k = 0; k < ell.size(); ++k)
        sum += std::norm(ell[k][v] - ell[k][u]);
      rate[v][u] = 0.5 * sum;
    }
  return rate;
}

std::vector<CoherenceRow> coherence_trajectory(
    const GKSLGenerator& G, const CMatrix& rho0,
    const SectorDecomposition& sectors, const std::vector<double>& times) {
  auto rates = dephasing_rates(G, sectors);
  bool h_scalar = sector_scalar(G.H, sectors);

  std::vector<CoherenceRow> rows;
  const auto& secs = sectors.sectors;
  for (double t : times) {
    CMatrix rho_t = evolve(G, rho0, t);
    for (std::size_t v = 0; v < secs.size(); ++v) {
      for (std::size_t u = 0; u < secs.size(); ++u) {
        double now =
            (secs[v].projector * rho_t * secs[u].projector).hs_norm();
        double init =
            (secs[v].projector * rho0 * secs[u].projector).hs_norm();
        CoherenceRow row{t, v, u, now, 0.0, h_scalar, 0.0};
        if (h_scalar) row.predicted_norm = std::exp(-rates[v][u] * t) * init;
        if (v == u)
          row.diag_drift =
              (secs[v].projector * (rho_t - rho0) * secs[u].projector)
                  .hs_norm();
        rows.push_back(row);
      }
    }
  }
  return rows;
}

CMatrix functional_calculus(
    const SectorDecomposition& sectors,
    const std::function<cplx(const std::vector<double>&)>& phi) {
  CMatrix out(sectors.dim);
  for (const auto& s : sectors.sectors)
    out = out + phi(s.nu) * s.projector;
  return out;
}

}  // namespace bilindblad::gksl
