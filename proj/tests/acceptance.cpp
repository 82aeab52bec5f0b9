// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Every tolerance is pinned in this file.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bilindblad/config.hpp"
#include "bilindblad/contact.hpp"
#include "bilindblad/models.hpp"
#include "bilindblad/moyal.hpp"
#include "bilindblad/poisson.hpp"
#include "bilindblad/sectors.hpp"
#include "bilindblad/suites.hpp"

using namespace bilindblad;
using sym::Expr;
using la::CMatrix;
using la::cplx;

namespace {

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

int g_failures = 0;

struct Criterion {
  std::string label;
  bool ok = true;
  std::vector<std::string> notes;

  explicit Criterion(std::string l) : label(std::move(l)) {}

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }

  ~Criterion() {
    std::printf("criterion %s: %s\n", label.c_str(), ok ? "PASS" : "FAIL");
    for (const auto& n : notes) std::printf("    failed: %s\n", n.c_str());
    if (!ok) ++g_failures;
  }
};

double elapsed(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

Expr S(const std::string& n) { return Expr::symbol(n); }

Expr random_poly(std::mt19937_64& rng, const std::vector<std::string>& vars,
                 int max_deg = 2) {
  std::uniform_int_distribution<int> nterms(1, 3);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> deg(0, max_deg);
  Expr e;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    int c = coeff(rng);
    if (c == 0) c = 2;
    Expr term = Expr::constant(c);
    for (const auto& v : vars) term = term * S(v).pow(deg(rng));
    e += term;
  }
  return e;
}

// ---------------------------------------------------------------------------

void criterion_1_pencil_compatibility() {
  Criterion c("1 (pencil compatibility, both modes, < 1 s)");
  auto t0 = clock_type::now();
  auto m = models::euler_pencil();
  auto convex = sym::build_pencil(*m.classical.p0, *m.classical.p1,
                                  sym::PencilMode::Convex);
  auto diff = sym::build_pencil(*m.classical.p0, *m.classical.p1,
                                sym::PencilMode::Difference);
  c.require(sym::verify_jacobi(convex).kind == sym::Zero::ExactZero,
            "convex-mode jacobiator is not the zero polynomial");
  c.require(sym::verify_jacobi(diff).kind == sym::Zero::ExactZero,
            "difference-mode jacobiator is not the zero polynomial");
  c.require(elapsed(t0) < 1.0, "runtime exceeded 1 s");
}

void criterion_2_casimirs_and_field() {
  Criterion c("2 (Casimirs and bi-Hamiltonian field, exact)");
  auto m = models::euler_pencil();
  const auto& P0 = *m.classical.p0;
  const auto& P1 = *m.classical.p1;
  Expr C0 = m.classical.functions.at("C0");
  Expr C1 = m.classical.functions.at("C1");

  for (auto coord : P0.coords()) {
    c.require(sym::poisson_bracket(P0, S(sym::Symbols::name(coord)), C0)
                  .is_structurally_zero(),
              "C0 fails the Casimir identity for the first leg");
    c.require(sym::poisson_bracket(P1, S(sym::Symbols::name(coord)), C1)
                  .is_structurally_zero(),
              "C1 fails the Casimir identity for the second leg");
  }

  auto bh = sym::bihamiltonian_check(P0, C1, P1, C0);
  c.require(bh.holds, "the two Hamiltonian routes disagree");
  for (const auto& comp : bh.residual)
    c.require(comp.is_structurally_zero(), "nonzero residual component");

  Expr m1 = S("m1"), m2 = S("m2"), m3 = S("m3");
  std::vector<Expr> X = {m2 * m2 - m3 * m3, 2 * m1 * m3 - m1 * m2,
                         m1 * m3 - 2 * m1 * m2};
  for (std::size_t i = 0; i < 3; ++i)
    c.require((bh.field0[i] - X[i]).is_structurally_zero(),
              "field component differs from the closed form");
}

void criterion_3_invariants_commute() {
  Criterion c("3 (pencil bracket of the Casimirs vanishes in lambda)");
  auto m = models::euler_pencil();
  for (auto mode : {sym::PencilMode::Convex, sym::PencilMode::Difference}) {
    auto pencil = sym::build_pencil(*m.classical.p0, *m.classical.p1, mode);
    Expr bracket = sym::poisson_bracket(pencil,
                                        m.classical.functions.at("C0"),
                                        m.classical.functions.at("C1"));
    c.require(bracket.is_structurally_zero(),
              "{C0,C1} along the pencil is not the zero polynomial");
  }
}

void criterion_4_pn_example() {
  Criterion c("4 (cotangent-bundle pencil: compatibility, commuting "
              "eigenvalues, degrees, rank)");
  auto m = models::pn_r4();
  const auto& P0 = *m.classical.p0;
  const auto& P1 = *m.classical.p1;

  // Compatibility via the jacobiator of the sum structure.
  std::vector<std::string> names;
  for (std::size_t i = 0; i < P0.dim(); ++i) names.push_back(P0.coord_name(i));
  sym::PoissonStructure sum(names);
  for (std::size_t i = 0; i < P0.dim(); ++i)
    for (std::size_t j = i + 1; j < P0.dim(); ++j)
      sum.set_component(i, j, P0.component(i, j) + P1.component(i, j));
  c.require(sym::verify_jacobi(sum).kind == sym::Zero::ExactZero,
            "sum structure fails the Jacobi identity");
  c.require(sym::verify_jacobi(P1).kind == sym::Zero::ExactZero,
            "second structure fails the Jacobi identity");

  Expr l1 = m.classical.functions.at("lambda1");
  Expr l2 = m.classical.functions.at("lambda2");
  c.require(sym::poisson_bracket(P0, l1, l2).is_structurally_zero(),
            "eigenvalues do not commute under the first structure");
  c.require(sym::poisson_bracket(P1, l1, l2).is_structurally_zero(),
            "eigenvalues do not commute under the second structure");

  auto d1 = sym::homogeneity_degree(m.classical.liouville, P0.coords(), l1);
  auto d2 = sym::homogeneity_degree(m.classical.liouville, P0.coords(), l2);
  c.require(d1 && *d1 == sym::Rat(1), "lambda1 is not 1-homogeneous");
  c.require(d2 && *d2 == sym::Rat(1), "lambda2 is not 1-homogeneous");

  // Rank of the restricted integrals at 10 random samples.
  auto chart = sym::ContactChart::standard();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<std::vector<double>> samples;
  for (int s = 0; s < 10; ++s) samples.push_back({u(rng), u(rng), u(rng)});
  int rank = sym::rank_of_differentials(
      {m.classical.functions.at("h"), m.classical.functions.at("I1"),
       m.classical.functions.at("I2")},
      chart.coords(), samples);
  c.require(rank == 2, "restricted differentials have rank != 2");
}

void criterion_5_linear_contact() {
  Criterion c("5 (linear contact model: flow, involution ledger, "
              "correspondence)");
  auto chart = sym::ContactChart::standard();
  Expr p = S("p"), z = S("z");
  Expr h = z - p;
  Expr I1 = sym::exp(-z);

  auto X = sym::contact_vector_field(chart, h);
  c.require((X[0] - Expr::constant(1)).is_structurally_zero() &&
                (X[1] - p).is_structurally_zero() &&
                (X[2] - z).is_structurally_zero(),
            "flow differs from (1, p, z)");

  c.require(sym::jacobi_bracket(chart, I1, h).is_zero(),
            "{exp(-z), z-p} is not identically zero (computed value "
            "-(1+z)exp(-z))");

  Expr transport = chart.directional(X, I1) - I1;
  c.require(transport.is_zero(),
            "flow derivative of exp(-z) is not exp(-z) (computed value "
            "-z exp(-z))");

  auto P4 = sym::symplectization_structure(chart);
  std::mt19937_64 rng(1234);
  bool corr = true;
  for (int i = 0; i < 20 && corr; ++i) {
    Expr f = random_poly(rng, {"q", "p", "z"});
    Expr g = random_poly(rng, {"q", "p", "z"});
    Expr lifted = sym::poisson_bracket(P4, sym::homogeneous_lift(f),
                                       sym::homogeneous_lift(g));
    Expr diff = lifted.substitute({{sym::Symbols::id("r"),
                                    Expr::constant(1)}}) -
                sym::jacobi_bracket(chart, f, g);
    corr = diff.is_structurally_zero();
  }
  c.require(corr, "lifted-bracket correspondence residual is nonzero");
}

void criterion_6_qubit_dephasing() {
  Criterion c("6 (dephasing qubit: kernel, closed form, Choi, < 1 s)");
  auto t0 = clock_type::now();
  const double omega = 1.0, gamma = 0.5;
  auto m = models::qubit_dephasing(omega, gamma);
  const auto& G = *m.quantum.g0;

  c.require(gksl::kernel_of_adjoint(G, 1e-9).size() == 2,
            "conserved-observable space dimension != 2");

  double worst = 0.0;
  for (double t = 0.0; t <= 5.0; t += 0.2) {
    CMatrix xt = gksl::evolve_heisenberg(G, la::sigma_x(), t);
    CMatrix ref = std::exp(-2.0 * gamma * t) *
                  (std::cos(omega * t) * la::sigma_x() -
                   std::sin(omega * t) * la::sigma_y());
    worst = std::max(worst, (xt - ref).max_abs());
  }
  c.require(worst < 1e-9, "sigma_x(t) misses the closed form beyond 1e-9");

  for (double t : {0.1, 1.0, 10.0})
    c.require(gksl::cp_check(G, t, 1e-10),
              "Choi minimum eigenvalue below -1e-10");
  c.require(elapsed(t0) < 1.0, "runtime exceeded 1 s");
}

void criterion_7_qubit_pencil() {
  Criterion c("7 (qubit pencil: CPTP, conserved sigma_z, affinity)");
  auto m = models::qubit_pencil();
  const auto& G0 = *m.quantum.g0;
  const auto& G1 = *m.quantum.g1;
  std::vector<double> lambdas = {0.0, 0.25, 0.5, 0.75, 1.0};

  auto rep = gksl::bilindblad_check(G0, G1, m.quantum.integrals, lambdas);
  for (const auto& pt : rep.points) {
    c.require(pt.cptp_ok, "CPTP check failed along the pencil");
    c.require(pt.max_integral_residual < 1e-12,
              "adjoint does not annihilate sigma_z within 1e-12");
  }

  auto S0 = gksl::to_superoperator(G0, gksl::Picture::Schrodinger);
  auto S1 = gksl::to_superoperator(G1, gksl::Picture::Schrodinger);
  for (double lam : lambdas) {
    auto Sl = gksl::to_superoperator(gksl::convex_combine(G0, G1, lam),
                                     gksl::Picture::Schrodinger);
    CMatrix expect = (1.0 - lam) * S0.matrix + lam * S1.matrix;
    c.require((Sl.matrix - expect).max_abs() < 1e-12,
              "superoperator affinity residual above 1e-12");
  }
}

void criterion_8_dephasing_rates() {
  Criterion c("8 (sector dephasing-rate law on the 9-point grid, < 10 s)");
  auto t0 = clock_type::now();
  auto m = models::euler_quantum();
  const auto& G = *m.quantum.g0;
  const std::size_t d = G.dim();
  auto sectors = gksl::joint_sectors(m.quantum.integrals);

  CMatrix rho0(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      rho0(i, j) = 1.0 / static_cast<double>(d);

  auto rows = gksl::coherence_trajectory(G, rho0, sectors,
                                         {0.1, 0.5, 1.0, 2.0});
  for (const auto& row : rows) {
    c.require(row.prediction_valid, "Hamiltonian is not sector-scalar");
    if (row.nu == row.mu) {
      c.require(row.diag_drift < 1e-10, "diagonal block drifted beyond 1e-10");
    } else if (row.predicted_norm > 1e-14) {
      double rel = std::abs(row.block_norm - row.predicted_norm) /
                   row.predicted_norm;
      c.require(rel < 1e-8,
                "off-diagonal block misses the rate law beyond 1e-8");
    }
  }
  c.require(elapsed(t0) < 10.0, "runtime exceeded 10 s");
}

void criterion_9_moyal_dirac() {
  Criterion c("9 (Moyal bracket grading and associativity, exact)");
  using moyal::PhaseSymbol;
  auto X = PhaseSymbol::x();
  auto Xi = PhaseSymbol::xi();

  for (int a = 0; a <= 2; ++a)
    for (int b = 0; a + b <= 2; ++b)
      for (int e = 0; e <= 2; ++e)
        for (int f = 0; e + f <= 2; ++f) {
          auto lhs = PhaseSymbol::monomial(a, b, 0, {1, 0});
          auto rhs = PhaseSymbol::monomial(e, f, 0, {1, 0});
          c.require(moyal::dirac_residual(lhs, rhs).is_zero(),
                    "nonzero residual on a degree-<=2 monomial pair");
        }

  auto x3 = X * X * X;
  auto xi3 = Xi * Xi * Xi;
  auto expected = PhaseSymbol::constant(9) * X * X * Xi * Xi -
                  PhaseSymbol::monomial(0, 0, 2, {mpq_class(3, 2), 0});
  c.require(moyal::moyal_bracket(x3, xi3) == expected,
            "cubic bracket misses 9 x^2 xi^2 - (3/2) hbar^2");

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> deg(0, 2);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int i = 0; i < 20; ++i) {
    auto rand_sym = [&] {
      PhaseSymbol s;
      for (int t = 0; t < 3; ++t) {
        int cc = coeff(rng);
        if (cc == 0) cc = 1;
        s += PhaseSymbol::monomial(deg(rng), deg(rng), 0, {mpq_class(cc), 0});
      }
      return s;
    };
    auto a = rand_sym(), b = rand_sym(), cc = rand_sym();
    auto assoc = moyal::star_product(moyal::star_product(a, b), cc) -
                 moyal::star_product(a, moyal::star_product(b, cc));
    c.require(assoc.is_zero(), "associativity residual is nonzero");
  }
}

void criterion_10_egorov() {
  Criterion c("10 (semiclassical residual sweep on the oscillator, < 30 s)");
  auto t0 = clock_type::now();
  const double gamma = 0.5;
  auto m = models::oscillator(gamma);
  const auto& w = *m.weyl;

  moyal::EgorovModel model{w.hamiltonian, w.observable, w.lindblads};
  auto sweep = moyal::egorov_sweep(model, w.hbars, 60, 6);
  c.require(sweep.slope_valid, "sweep produced degenerate residuals");
  c.require(sweep.slope >= 1.8 && sweep.slope <= 2.2,
            "fitted slope outside [1.8, 2.2]");

  for (const auto& pt : sweep.points) {
    moyal::WeylQuantizer q(60, pt.hbar);
    CMatrix Xop = q.quantize(w.observable).matrix;
    CMatrix L = std::sqrt(gamma) * q.quantize(w.hamiltonian).matrix;
    gksl::GKSLGenerator D(pt.hbar, CMatrix::zero(60), {L});
    CMatrix want = (-gamma * pt.hbar * pt.hbar / 2.0) * Xop;
    double err = moyal::interior_mask(gksl::heisenberg_apply(D, Xop) - want, 6)
                     .op_norm();
    c.require(err < 1e-10, "dissipator is not the quadratic contraction");
  }

  moyal::EgorovModel cc1{w.hamiltonian, w.hamiltonian, w.lindblads};
  auto sweep1 = moyal::egorov_sweep(cc1, w.hbars, 60, 6);
  for (const auto& pt : sweep1.points)
    c.require(pt.ratio < 1e-10, "residual on the integral itself >= 1e-10");
  c.require(elapsed(t0) < 30.0, "runtime exceeded 30 s");
}

void criterion_11_duality_structure() {
  Criterion c("11 (duality and structure properties on a random dim-6 "
              "generator)");
  std::mt19937_64 rng(2718);
  CMatrix H = la::random_hermitian(rng, 6);
  std::vector<CMatrix> Ls = {la::random_matrix(rng, 6),
                             la::random_matrix(rng, 6)};
  gksl::GKSLGenerator G(1.0, H, Ls);

  double pairing = 0, trace = 0, herm = 0;
  for (int i = 0; i < 100; ++i) {
    CMatrix rho = la::random_density(rng, 6);
    CMatrix A = la::random_hermitian(rng, 6);
    pairing = std::max(pairing, gksl::adjoint_pairing_residual(G, rho, A));
    CMatrix Lr = gksl::lindblad_apply(G, rho);
    trace = std::max(trace, std::abs(Lr.trace()));
    herm = std::max(herm, (Lr - Lr.adjoint()).max_abs());
  }
  c.require(pairing < 1e-12, "trace-pairing residual above 1e-12");
  c.require(trace < 1e-12, "trace preservation residual above 1e-12");
  c.require(herm < 1e-12, "Hermiticity residual above 1e-12");
  c.require(gksl::heisenberg_apply(G, CMatrix::identity(6)).op_norm() < 1e-12,
            "adjoint does not annihilate the identity");

  CMatrix rho = la::random_density(rng, 6);
  CMatrix once = gksl::evolve(G, rho, 1.5);
  CMatrix twice = gksl::evolve(G, gksl::evolve(G, rho, 0.7), 0.8);
  c.require((once - twice).max_abs() < 1e-9, "semigroup law beyond 1e-9");
}

// ---------------------------------------------------------------------------

int run_cli(const std::string& args, std::string* out_path = nullptr) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / "bilindblad_acceptance";
  fs::create_directories(dir);
  fs::path out = dir / ("out" + std::to_string(counter++) + ".txt");
  std::string cmd = std::string(BILINDBLAD_CLI) + " " + args + " > " +
                    out.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  if (out_path) *out_path = out.string();
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_12_cli_determinism() {
  Criterion c("12 (CLI determinism and exit-code contract)");
  fs::path dir = fs::temp_directory_path() / "bilindblad_acceptance";
  fs::create_directories(dir);

  std::string r1, r2;
  int e1 = run_cli("verify --model euler_pencil --seed 7 --out " +
                       (dir / "run1").string(),
                   &r1);
  int e2 = run_cli("verify --model euler_pencil --seed 7 --out " +
                       (dir / "run2").string(),
                   &r2);
  c.require(e1 == 0 && e2 == 0, "pass fixture did not exit 0");
  c.require(slurp((dir / "run1" / "report.txt").string()) ==
                slurp((dir / "run2" / "report.txt").string()),
            "two seeded runs produced different reports");

  // Fail fixture: the exported pencil with its Casimirs swapped.
  auto model = models::euler_pencil();
  std::swap(model.classical.functions["C0"],
            model.classical.functions["C1"]);
  fs::path swapped = dir / "swapped.json";
  std::ofstream(swapped) << config::export_model(model);
  int efail = run_cli("verify --config " + swapped.string() +
                      " --suite pencil --mode difference");
  c.require(efail == 1, "fail fixture did not exit 1");

  // Config-error fixtures.
  fs::path bad = dir / "bad.json";
  std::ofstream(bad) << "{\"bogus\": 1}\n";
  c.require(run_cli("verify --config " + bad.string()) == 2,
            "unknown-key config did not exit 2");
  fs::path mangled = dir / "mangled.json";
  std::ofstream(mangled) << "{ not json";
  c.require(run_cli("verify --config " + mangled.string()) == 2,
            "malformed config did not exit 2");
}

}  // namespace

int main() {
  criterion_1_pencil_compatibility();
  criterion_2_casimirs_and_field();
  criterion_3_invariants_commute();
  criterion_4_pn_example();
  criterion_5_linear_contact();
  criterion_6_qubit_dephasing();
  criterion_7_qubit_pencil();
  criterion_8_dephasing_rates();
  criterion_9_moyal_dirac();
  criterion_10_egorov();
  criterion_11_duality_structure();
  criterion_12_cli_determinism();

  std::printf("acceptance: %d of 12 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
