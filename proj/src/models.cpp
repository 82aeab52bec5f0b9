#include "bilindblad/models.hpp"

#include <cmath>
#include <stdexcept>

namespace bilindblad::models {

namespace {

using sym::Expr;

Expr S(const std::string& n) { return Expr::symbol(n); }

CMatrix pauli_z_hamiltonian(double scale) {
  CMatrix H = scale * la::sigma_z();
  return H;
}

}  // namespace

ModelFixture pn_r4() {
  ModelFixture m;
  m.name = "pn_r4";
  m.anchor = "cotangent-bundle pencil with eigenvalue integrals p1, p2*x2";

  PoissonStructure canonical({"x1", "x2", "p1", "p2"});
  canonical.set_component(0, 2, Expr::constant(1));
  canonical.set_component(1, 3, Expr::constant(1));

  PoissonStructure second({"x1", "x2", "p1", "p2"});
  second.set_component(0, 2, S("p1"));
  second.set_component(1, 3, S("p2") * S("x2"));

  m.classical.p0 = canonical;
  m.classical.p1 = second;
  m.classical.chart = ContactChart::standard();

  m.classical.functions["lambda1"] = S("p1");
  m.classical.functions["lambda2"] = S("p2") * S("x2");
  m.classical.functions["H"] = S("p1") + S("p2") * S("x2");
  m.classical.functions["h"] = S("z") - S("p");
  m.classical.functions["I1"] = S("p");
  m.classical.functions["I2"] = S("z");

  m.classical.liouville = {Expr::zero(), Expr::zero(), S("p1"), S("p2")};
  m.expected["homdeg.lambda1"] = 1;
  m.expected["homdeg.lambda2"] = 1;
  m.expected["homdeg.H"] = 1;

  // Change to radial coordinates: x1 = q, x2 = z, p1 = -r p, p2 = r.
  m.classical.restriction = {{"x1", S("q")},
                             {"x2", S("z")},
                             {"p1", -(S("r") * S("p"))},
                             {"p2", S("r")}};
  m.classical.functions["lambda1_restricted"] = -S("p");
  m.classical.functions["lambda2_restricted"] = S("z");

  m.suites = {"pencil", "contact"};
  return m;
}

ModelFixture linear_contact() {
  ModelFixture m;
  m.name = "linear_contact";
  m.anchor = "linear contact Hamiltonian h = z - p on the standard chart";
  m.classical.chart = ContactChart::standard();
  m.classical.functions["h"] = S("z") - S("p");
  m.classical.functions["I0"] = S("z") - S("p");
  m.classical.functions["I1"] = sym::exp(-S("z"));
  m.suites = {"contact"};
  return m;
}

ModelFixture qubit_dephasing(double omega, double gamma) {
  ModelFixture m;
  m.name = "qubit_dephasing";
  m.anchor = "two-level pure dephasing with conserved sigma_z";
  double hbar = 1.0;
  GKSLGenerator G(hbar, pauli_z_hamiltonian(hbar * omega / 2.0),
                  {std::sqrt(gamma) * la::sigma_z()});
  m.quantum.g0 = std::move(G);
  m.quantum.integrals = {la::sigma_z()};
  m.suites = {"gksl", "dephasing"};
  m.expected["kernel_dim"] = 2;
  m.expected["algebra_dim"] = 2;
  m.expected["sector_count"] = 2;
  m.parameters["omega"] = omega;
  m.parameters["gamma"] = gamma;
  return m;
}

ModelFixture qubit_pencil(double omega0, double omega1, double gamma) {
  ModelFixture m;
  m.name = "qubit_pencil";
  m.anchor = "unitary/dephasing generator pair sharing sigma_z";
  double hbar = 1.0;
  m.quantum.g0 = GKSLGenerator(hbar, pauli_z_hamiltonian(hbar * omega0 / 2.0),
                               {});
  m.quantum.g1 = GKSLGenerator(hbar, pauli_z_hamiltonian(hbar * omega1 / 2.0),
                               {std::sqrt(gamma) * la::sigma_z()});
  m.quantum.integrals = {la::sigma_z()};
  m.suites = {"gksl", "pencil-quantum"};
  m.expected["kernel_dim"] = 2;
  m.expected["algebra_dim"] = 2;
  m.parameters["omega0"] = omega0;
  m.parameters["omega1"] = omega1;
  m.parameters["gamma"] = gamma;
  return m;
}

ModelFixture euler_pencil() {
  ModelFixture m;
  m.name = "euler_pencil";
  m.anchor = "so(3)/sl(2) linear Poisson pencil with Casimirs C0, C1";

  PoissonStructure p0({"m1", "m2", "m3"});
  p0.set_component(0, 1, -S("m3"));
  p0.set_component(0, 2, S("m2"));
  p0.set_component(1, 2, -S("m1"));

  PoissonStructure p1({"m1", "m2", "m3"});
  p1.set_component(0, 1, -S("m2"));
  p1.set_component(0, 2, S("m3"));
  p1.set_component(1, 2, -2 * S("m1"));

  m.classical.p0 = p0;
  m.classical.p1 = p1;

  Expr m1 = S("m1"), m2 = S("m2"), m3 = S("m3");
  Expr sumsq = m1 * m1 + m2 * m2 + m3 * m3;
  m.classical.functions["C0"] = Expr::constant(-1, 2) * sumsq;
  m.classical.functions["C1"] = m1 * m1 + m2 * m3;
  m.classical.functions["F1"] = m1 * m1 + m2 * m3;
  m.classical.functions["I0_lift"] = sym::sqrt(sumsq);
  m.classical.functions["I1_lift"] = sym::sqrt(m1 * m1 + m2 * m3);
  m.classical.functions["I0"] =
      sym::sqrt(Expr::constant(1) + m2 * m2 + m3 * m3);
  m.classical.functions["I1"] = sym::sqrt(Expr::constant(1) + m2 * m3);

  m.classical.liouville = {m1, m2, m3};
  m.expected["homdeg.F1"] = 2;
  m.expected["homdeg.I0_lift"] = 1;
  m.expected["homdeg.I1_lift"] = 1;

  m.classical.restriction = {{"m1", Expr::constant(1)}};
  m.classical.functions["I0_lift_restricted"] =
      m.classical.functions["I0"];
  m.classical.functions["I1_lift_restricted"] =
      m.classical.functions["I1"];

  m.classical.functions["X1"] = m2 * m2 - m3 * m3;
  m.classical.functions["X2"] = 2 * m1 * m3 - m1 * m2;
  m.classical.functions["X3"] = m1 * m3 - 2 * m1 * m2;

  m.suites = {"pencil"};
  return m;
}

ModelFixture euler_quantum(std::size_t dim_per_sector,
                           std::vector<double> gammas) {
  if (dim_per_sector == 0) throw std::invalid_argument("empty sectors");
  ModelFixture m;
  m.name = "euler_quantum";
  m.anchor = "diagonal quantization of the restricted pencil integrals";

  // Joint spectrum sampled on the grid (m2,m3) in {-1,0,1}^2.
  std::vector<double> nu0, nu1;
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      for (std::size_t r = 0; r < dim_per_sector; ++r) {
        nu0.push_back(std::sqrt(1.0 + a * a + b * b));
        nu1.push_back(std::sqrt(1.0 + a * b));
      }
    }
  }
  const std::size_t d = nu0.size();
  std::vector<la::cplx> d0(nu0.begin(), nu0.end());
  std::vector<la::cplx> d1(nu1.begin(), nu1.end());
  CMatrix I0 = CMatrix::diag(d0);
  CMatrix I1 = CMatrix::diag(d1);

  // Dephasing channels by functional calculus in the integrals:
  // phi_1 = nu0, phi_2 = nu1, phi_3 = nu0*nu1.
  std::vector<CMatrix> Ls;
  for (std::size_t k = 0; k < gammas.size() && k < 3; ++k) {
    std::vector<la::cplx> diag(d);
    for (std::size_t i = 0; i < d; ++i) {
      double phi = k == 0 ? nu0[i] : (k == 1 ? nu1[i] : nu0[i] * nu1[i]);
      diag[i] = std::sqrt(gammas[k]) * phi;
    }
    Ls.push_back(CMatrix::diag(diag));
  }

  double hbar = 1.0;
  m.quantum.g0 = GKSLGenerator(hbar, I0, Ls);
  m.quantum.g1 = GKSLGenerator(hbar, I1, Ls);
  m.quantum.integrals = {I0, I1};
  m.suites = {"gksl", "pencil-quantum", "dephasing"};
  // Grid tuples merge to 4 distinct sectors with multiplicities (1,4,2,2).
  double k = static_cast<double>(dim_per_sector);
  m.expected["sector_count"] = 4;
  m.expected["algebra_dim"] = 4;
  m.expected["kernel_dim"] = k * k * (1 + 16 + 4 + 4);
  return m;
}

ModelFixture oscillator(double gamma) {
  ModelFixture m;
  m.name = "oscillator";
  m.anchor = "harmonic-oscillator Weyl testbed for the semiclassical sweep";
  using moyal::PhaseSymbol;
  WeylData w;
  w.hamiltonian = PhaseSymbol::constant(mpq_class(1, 2)) *
                  (PhaseSymbol::x() * PhaseSymbol::x() +
                   PhaseSymbol::xi() * PhaseSymbol::xi());
  w.observable = PhaseSymbol::x();
  w.lindblads = {{w.hamiltonian, gamma}};
  w.hbars = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
  w.truncation = 60;
  w.margin = 6;
  m.weyl = std::move(w);
  m.suites = {"egorov"};
  return m;
}

std::vector<std::string> model_names() {
  return {"pn_r4",       "linear_contact", "qubit_dephasing", "qubit_pencil",
          "euler_pencil", "euler_quantum",  "oscillator"};
}

ModelFixture make_model(const std::string& name) {
  if (name == "pn_r4") return pn_r4();
  if (name == "linear_contact") return linear_contact();
  if (name == "qubit_dephasing") return qubit_dephasing();
  if (name == "qubit_pencil") return qubit_pencil();
  if (name == "euler_pencil") return euler_pencil();
  if (name == "euler_quantum") return euler_quantum();
  if (name == "oscillator") return oscillator();
  throw std::invalid_argument("unknown model '" + name + "'");
}

}  // namespace bilindblad::models
