#pragma once

#include <functional>
#include <vector>

#include "bilindblad/gksl.hpp"

namespace bilindblad::gksl {

struct Sector {
  std::vector<double> nu;  // joint eigenvalue tuple
  CMatrix projector;
  std::size_t multiplicity;
};

struct SectorDecomposition {
  std::size_t dim = 0;
  std::vector<Sector> sectors;  // sorted lexicographically by tuple
};

/// Simultaneous diagonalization of a commuting Hermitian family via iterated
/// eigenspace refinement; eigenvalues are clustered with gap tolerance 1e-8.
/// Throws naming the offending pair when inputs fail to commute within
/// commute_tol.
SectorDecomposition joint_sectors(const std::vector<CMatrix>& observables,
                                  double commute_tol = 1e-8);

/// rate(nu,mu) = 1/2 sum_k |l_{k,nu} - l_{k,mu}|^2 from the scalar action of
/// each Lindblad operator on each sector (precondition checked at 1e-9).
std::vector<std::vector<double>> dephasing_rates(
    const GKSLGenerator& G, const SectorDecomposition& sectors);

struct CoherenceRow {
  double t;
  std::size_t nu, mu;
  double block_norm;      // ||P_nu rho(t) P_mu||_HS
  double predicted_norm;  // e^{-rate t} ||P_nu rho(0) P_mu||_HS (when defined)
  bool prediction_valid;
  double diag_drift;      // ||P_nu (rho(t)-rho(0)) P_nu||_HS on nu == mu rows
};

/// Block norms of the evolved state over the sector grid; exponential-decay
/// predictions are attached when H acts as a scalar on every sector.
std::vector<CoherenceRow> coherence_trajectory(
    const GKSLGenerator& G, const CMatrix& rho0,
    const SectorDecomposition& sectors, const std::vector<double>& times);

/// sum_nu phi(nu) P_nu.
CMatrix functional_calculus(
    const SectorDecomposition& sectors,
    const std::function<cplx(const std::vector<double>&)>& phi);

/// True when O acts as a scalar on every sector (within tol); used for the
/// Hamiltonian gate in coherence_trajectory.
bool sector_scalar(const CMatrix& O, const SectorDecomposition& sectors,
                   double tol = 1e-9);

}  // namespace bilindblad::gksl
