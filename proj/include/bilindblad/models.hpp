#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bilindblad/contact.hpp"
#include "bilindblad/gksl.hpp"
#include "bilindblad/moyal.hpp"
#include "bilindblad/poisson.hpp"

namespace bilindblad::models {

using gksl::GKSLGenerator;
using la::CMatrix;
using sym::ContactChart;
using sym::Expr;
using sym::PoissonStructure;

struct ClassicalData {
  std::optional<PoissonStructure> p0, p1;
  std::optional<ContactChart> chart;
  std::map<std::string, Expr> functions;  // named scalar fields
  std::vector<Expr> liouville;            // scaling field over p0's chart
  std::map<std::string, Expr> restriction;  // coordinate substitutions
};

struct QuantumData {
  std::optional<GKSLGenerator> g0, g1;  // g1 present for pencils
  std::vector<CMatrix> integrals;
};

struct WeylData {
  moyal::PhaseSymbol hamiltonian;
  moyal::PhaseSymbol observable;
  std::vector<std::pair<moyal::PhaseSymbol, double>> lindblads;
  std::vector<double> hbars;
  std::size_t truncation = 60;
  std::size_t margin = 6;
};

struct ModelFixture {
  std::string name;
  std::string anchor;  // one-line description for list output
  ClassicalData classical;
  QuantumData quantum;
  std::optional<WeylData> weyl;
  std::vector<std::string> suites;  // applicable verification suites
  std::map<std::string, double> expected;  // scalar ledger (dims, counts)
  std::map<std::string, double> parameters;  // omega, gamma, ...
};

/// Cotangent-bundle pencil on (x1,x2,p1,p2) with recursion eigenvalues
/// p1 and p2*x2 and their contact restriction.
ModelFixture pn_r4();

/// Standard chart, h = z - p, with the flow (1, p, z).
ModelFixture linear_contact();

/// Two-level pure dephasing: H = hbar*omega/2 sz, L = sqrt(gamma) sz.
ModelFixture qubit_dephasing(double omega = 1.0, double gamma = 0.5);

/// Unitary leg vs dephasing leg sharing sigma_z as the quantum integral.
ModelFixture qubit_pencil(double omega0 = 0.8, double omega1 = 1.2,
                          double gamma = 0.6);

/// so(3)/sl(2) linear pencil with Casimirs C0, C1 and homogeneous lifts.
ModelFixture euler_pencil();

/// Diagonal quantization of the restricted integrals over the grid
/// (m2,m3) in {-1,0,1}^2, with dephasing channels from functional calculus.
ModelFixture euler_quantum(std::size_t dim_per_sector = 1,
                           std::vector<double> gammas = {0.5, 0.25, 0.1});

/// Harmonic-oscillator Weyl testbed: H = (x^2+xi^2)/2, f = x, one channel
/// with symbol H.
ModelFixture oscillator(double gamma = 0.5);

std::vector<std::string> model_names();
ModelFixture make_model(const std::string& name);

}  // namespace bilindblad::models
