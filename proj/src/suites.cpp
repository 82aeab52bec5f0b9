#include "bilindblad/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bilindblad::suites {

namespace {

using models::ModelFixture;
using report::CheckRecord;
using sym::Expr;
using sym::ZeroTest;
using la::CMatrix;
using la::cplx;

double tol_of(const RunOptions& opt, const std::string& key, double def) {
  auto it = opt.tolerances.find(key);
  return it == opt.tolerances.end() ? def : it->second;
}

CheckRecord record_zero(const std::string& name, const std::string& anchor,
                        const ZeroTest& zt) {
  CheckRecord r;
  r.name = name;
  r.anchor = anchor;
  r.residual = zt.witness;
  r.tolerance = 0.0;
  switch (zt.kind) {
    case sym::Zero::ExactZero:
      r.status = "pass";
      break;
    case sym::Zero::ProbabilisticZero:
      r.status = "prob";
      r.note = "randomized zero test";
      break;
    case sym::Zero::NonZero:
      r.status = "FAIL";
      break;
    case sym::Zero::Inconclusive:
      r.status = "FAIL";
      r.note = "inconclusive: sampling excluded by domains";
      break;
  }
  return r;
}

CheckRecord record_bound(const std::string& name, const std::string& anchor,
                         double residual, double tolerance) {
  CheckRecord r;
  r.name = name;
  r.anchor = anchor;
  r.residual = residual;
  r.tolerance = tolerance;
  r.status = residual < tolerance ? "pass" : "FAIL";
  return r;
}

CheckRecord record_flag(const std::string& name, const std::string& anchor,
                        bool ok, const std::string& note = "") {
  CheckRecord r;
  r.name = name;
  r.anchor = anchor;
  r.status = ok ? "pass" : "FAIL";
  r.note = note;
  return r;
}

Expr poly_from(std::mt19937_64& rng, const std::vector<std::string>& vars,
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
    for (const auto& v : vars) term = term * Expr::symbol(v).pow(deg(rng));
    e += term;
  }
  return e;
}

const Expr* find(const ModelFixture& m, const std::string& key) {
  auto it = m.classical.functions.find(key);
  return it == m.classical.functions.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------

std::vector<CheckRecord> pencil_suite(const ModelFixture& m,
                                      const RunOptions& opt) {
  std::vector<CheckRecord> out;
  if (!m.classical.p0 || !m.classical.p1) {
    out.push_back({"pencil", "", "skip", 0, 0, "no pencil data"});
    return out;
  }
  const auto& P0 = *m.classical.p0;
  const auto& P1 = *m.classical.p1;

  out.push_back(record_zero("pencil.leg0.jacobi",
                            "Jacobi identity of the first structure",
                            sym::verify_jacobi(P0, opt.seed)));
  out.push_back(record_zero("pencil.leg1.jacobi",
                            "Jacobi identity of the second structure",
                            sym::verify_jacobi(P1, opt.seed)));

  auto convex = sym::build_pencil(P0, P1, sym::PencilMode::Convex);
  auto diff = sym::build_pencil(P0, P1, sym::PencilMode::Difference);
  out.push_back(record_zero(
      "pencil.convex.jacobi",
      "jacobiator of the convex pencil vanishes identically in lambda",
      sym::verify_jacobi(convex, opt.seed)));
  out.push_back(record_zero(
      "pencil.difference.jacobi",
      "jacobiator of the difference pencil vanishes identically in lambda",
      sym::verify_jacobi(diff, opt.seed)));

  const auto& pencil = opt.mode == sym::PencilMode::Convex ? convex : diff;

  const Expr* C0 = find(m, "C0");
  const Expr* C1 = find(m, "C1");
  if (C0 && C1) {
    // Casimir property of each leg.
    auto merge = [](ZeroTest& acc, const ZeroTest& z) {
      if (!z.is_zero() || (acc.is_zero() && z.kind != sym::Zero::ExactZero))
        acc = z;
    };
    ZeroTest worst0{sym::Zero::ExactZero, 0};
    ZeroTest worst1{sym::Zero::ExactZero, 0};
    for (auto c : P0.coords()) {
      merge(worst0, sym::poisson_bracket(P0, Expr::symbol(c), *C0)
                        .zero_test(opt.seed));
      merge(worst1, sym::poisson_bracket(P1, Expr::symbol(c), *C1)
                        .zero_test(opt.seed));
    }
    out.push_back(record_zero("pencil.casimir0",
                              "C0 is a Casimir of the first structure",
                              worst0));
    out.push_back(record_zero("pencil.casimir1",
                              "C1 is a Casimir of the second structure",
                              worst1));

    auto bh = sym::bihamiltonian_check(P0, *C1, P1, *C0);
    ZeroTest bz{sym::Zero::ExactZero, 0};
    for (const auto& comp : bh.residual) {
      auto z = comp.zero_test(opt.seed);
      if (!z.is_zero()) {
        bz = z;
        break;
      }
      if (z.kind != sym::Zero::ExactZero) bz = z;
    }
    out.push_back(record_zero(
        "pencil.bihamiltonian",
        "the two Hamiltonian routes generate one vector field", bz));

    // Expected field components, when the fixture pins them.
    if (const Expr* X1 = find(m, "X1")) {
      const Expr* X2 = find(m, "X2");
      const Expr* X3 = find(m, "X3");
      bool ok = X2 && X3 && bh.field0.size() == 3 &&
                (bh.field0[0] - *X1).is_structurally_zero() &&
                (bh.field0[1] - *X2).is_structurally_zero() &&
                (bh.field0[2] - *X3).is_structurally_zero();
      out.push_back(record_flag("pencil.field_components",
                                "closed-form bi-Hamiltonian field", ok));
    }

    out.push_back(record_zero(
        "pencil.invariants_commute",
        "{C0,C1} vanishes identically along the pencil",
        sym::poisson_bracket(pencil, *C0, *C1).zero_test(opt.seed)));
  }

  // Recursion eigenvalues commute for both structures, when present.
  if (const Expr* l1 = find(m, "lambda1")) {
    if (const Expr* l2 = find(m, "lambda2")) {
      out.push_back(record_zero("pencil.eigenvalues.leg0",
                                "eigenvalue integrals commute (first leg)",
                                sym::poisson_bracket(P0, *l1, *l2)
                                    .zero_test(opt.seed)));
      out.push_back(record_zero("pencil.eigenvalues.leg1",
                                "eigenvalue integrals commute (second leg)",
                                sym::poisson_bracket(P1, *l1, *l2)
                                    .zero_test(opt.seed)));
    }
  }

  // Homogeneity ledger: expected degrees recorded as homdeg.<fn>.
  if (!m.classical.liouville.empty()) {
    for (const auto& [key, value] : m.expected) {
      if (key.rfind("homdeg.", 0) != 0) continue;
      std::string fn = key.substr(7);
      const Expr* f = find(m, fn);
      if (!f) continue;
      auto d = sym::homogeneity_degree(m.classical.liouville, P0.coords(), *f,
                                       opt.seed);
      bool ok = d.has_value() && d->get_d() == value;
      out.push_back(record_flag("pencil.homogeneity." + fn,
                                "Liouville scaling degree", ok,
                                d ? "degree " + std::to_string(d->get_d())
                                  : "no uniform degree"));
    }
  }

  // Restriction ledger: <fn>_restricted matches the recorded substitution.
  if (!m.classical.restriction.empty()) {
    for (const auto& [name, f] : m.classical.functions) {
      auto pos = name.find("_restricted");
      if (pos == std::string::npos) continue;
      const Expr* base = find(m, name.substr(0, pos));
      if (!base) continue;
      Expr restricted = sym::restrict_expr(*base, m.classical.restriction);
      restricted = sym::restrict_expr(restricted, {{"r", Expr::constant(1)}});
      out.push_back(record_zero("pencil.restriction." + name.substr(0, pos),
                                "restriction to the transverse hypersurface",
                                (restricted - f).zero_test(opt.seed)));
    }
  }

  return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckRecord> contact_suite(const ModelFixture& m,
                                       const RunOptions& opt) {
  std::vector<CheckRecord> out;
  if (!m.classical.chart || !find(m, "h")) {
    out.push_back({"contact", "", "skip", 0, 0, "no contact data"});
    return out;
  }
  const auto& chart = *m.classical.chart;
  const Expr h = *find(m, "h");

  out.push_back(record_zero("contact.chart",
                            "Reeb normalization and kernel conditions",
                            chart.validate(opt.seed)));

  auto nd = sym::contact_nondegeneracy(chart, {{0, 0, 0}, {1, -1, 2}});
  out.push_back(record_flag(
      "contact.nondegeneracy", "volume coefficient of the contact form",
      nd.nonzero_at_all_samples,
      nd.constant ? "constant coefficient" : "sampled"));

  std::vector<Expr> X;
  bool standard = chart.is_standard;
  if (standard) {
    X = sym::contact_vector_field(chart, h);

    // Defining equations: alpha(X) = h and the dalpha contraction identity.
    Expr pairing = -h;
    for (std::size_t i = 0; i < chart.dim(); ++i)
      pairing += chart.alpha[i] * X[i];
    out.push_back(record_zero("contact.flow.pairing",
                              "alpha evaluated on the flow returns h",
                              pairing.zero_test(opt.seed)));
    ZeroTest worst{sym::Zero::ExactZero, 0};
    Expr Rh = chart.directional(chart.reeb, h);
    for (std::size_t j = 0; j < chart.dim(); ++j) {
      Expr lhs;
      for (std::size_t i = 0; i < chart.dim(); ++i)
        lhs += X[i] * (chart.alpha[j].derivative(chart.coords()[i]) -
                       chart.alpha[i].derivative(chart.coords()[j]));
      Expr rhs = Rh * chart.alpha[j] - h.derivative(chart.coords()[j]);
      auto z = (lhs - rhs).zero_test(opt.seed);
      if (!z.is_zero()) {
        worst = z;
        break;
      }
      if (z.kind != sym::Zero::ExactZero) worst = z;
    }
    out.push_back(record_zero("contact.flow.dalpha",
                              "contraction identity of the flow", worst));

    // Linear model: the flow is (1, p, z) on the nose.
    Expr p = Expr::symbol(chart.coords()[1]);
    Expr z = Expr::symbol(chart.coords()[2]);
    if ((h - (z - p)).is_structurally_zero()) {
      bool exact = (X[0] - Expr::constant(1)).is_structurally_zero() &&
                   (X[1] - p).is_structurally_zero() &&
                   (X[2] - z).is_structurally_zero();
      out.push_back(record_flag("contact.flow.linear",
                                "closed-form flow (1, p, z)", exact));
    }
  } else {
    out.push_back({"contact.flow", "", "skip", 0, 0, "nonstandard chart"});
  }

  // Dissipated quantities and involution.
  std::vector<std::pair<std::string, Expr>> integrals;
  for (const auto& [name, f] : m.classical.functions) {
    if (name.size() >= 2 && name[0] == 'I' && std::isdigit(name[1]) &&
        name.find('_') == std::string::npos)
      integrals.emplace_back(name, f);
  }
  for (const auto& [name, I] : integrals) {
    out.push_back(record_zero("contact.dissipated." + name,
                              "Jacobi involution with the Hamiltonian",
                              sym::jacobi_bracket(chart, I, h)
                                  .zero_test(opt.seed)));
  }
  for (std::size_t i = 0; i < integrals.size(); ++i)
    for (std::size_t j = i + 1; j < integrals.size(); ++j)
      out.push_back(record_zero(
          "contact.involution." + integrals[i].first + "." +
              integrals[j].first,
          "integrals commute in the Jacobi bracket",
          sym::jacobi_bracket(chart, integrals[i].second, integrals[j].second)
              .zero_test(opt.seed)));

  // Linear model ledger: I1 is transported onto itself along the flow.
  if (standard && m.name == "linear_contact") {
    const Expr* I1 = find(m, "I1");
    if (I1) {
      Expr transport = chart.directional(X, *I1) - *I1;
      out.push_back(record_zero("contact.transport.I1",
                                "flow derivative of I1 equals I1",
                                transport.zero_test(opt.seed)));
    }
  }

  // Rank of the differentials at the origin plus random samples.
  {
    std::vector<Expr> fs = {h};
    for (const auto& [name, I] : integrals) fs.push_back(I);
    std::vector<std::vector<double>> samples = {{0, 0, 0}};
    std::mt19937_64 rng(opt.seed ^ 0xabcdef);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int s = 0; s < 10; ++s) samples.push_back({u(rng), u(rng), u(rng)});
    int rank = sym::rank_of_differentials(fs, chart.coords(), samples);
    out.push_back(record_flag(
        "contact.rank", "independence of the dissipated quantities",
        rank >= 2, "rank " + std::to_string(rank)));
  }

  // Jacobi bracket is the r=1 restriction of the lifted canonical bracket.
  if (standard) {
    auto P4 = sym::symplectization_structure(chart);
    std::mt19937_64 rng(opt.seed ^ 0x5ca1ab1e);
    std::vector<std::string> vars = {chart.coord_name(0), chart.coord_name(1),
                                     chart.coord_name(2)};
    ZeroTest worst{sym::Zero::ExactZero, 0};
    for (int i = 0; i < 20; ++i) {
      Expr f = poly_from(rng, vars), g = poly_from(rng, vars);
      Expr lifted = sym::poisson_bracket(P4, sym::homogeneous_lift(f),
                                         sym::homogeneous_lift(g));
      Expr diff = lifted.substitute({{sym::Symbols::id("r"),
                                      Expr::constant(1)}}) -
                  sym::jacobi_bracket(chart, f, g);
      auto z = diff.zero_test(opt.seed + i);
      if (!z.is_zero()) {
        worst = z;
        break;
      }
      if (z.kind != sym::Zero::ExactZero) worst = z;
    }
    out.push_back(record_zero("contact.correspondence",
                              "lifted bracket restricts to the Jacobi bracket",
                              worst));

    // Lifts are 1-homogeneous in the radial coordinate.
    Expr r = Expr::symbol("r");
    bool deg_ok = true;
    for (int i = 0; i < 10 && deg_ok; ++i) {
      Expr f = poly_from(rng, vars);
      auto d = sym::homogeneity_degree({r}, {sym::Symbols::id("r")},
                                       sym::homogeneous_lift(f), opt.seed);
      deg_ok = d.has_value() && *d == sym::Rat(1);
    }
    out.push_back(record_flag("contact.lift.degree",
                              "radial degree of homogeneous lifts", deg_ok));
  }

  return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckRecord> gksl_suite(const ModelFixture& m,
                                    const RunOptions& opt) {
  std::vector<CheckRecord> out;
  if (!m.quantum.g0) {
    out.push_back({"gksl", "", "skip", 0, 0, "no generator data"});
    return out;
  }
  const auto& G = *m.quantum.g0;
  const std::size_t d = G.dim();
  std::mt19937_64 rng(opt.seed ^ 0x6b5a);

  double pairing = 0, trace = 0, herm = 0;
  for (int i = 0; i < 100; ++i) {
    CMatrix rho = la::random_density(rng, d);
    CMatrix A = la::random_hermitian(rng, d);
    pairing = std::max(pairing, gksl::adjoint_pairing_residual(G, rho, A));
    CMatrix Lr = gksl::lindblad_apply(G, rho);
    trace = std::max(trace, std::abs(Lr.trace()));
    herm = std::max(herm, (Lr - Lr.adjoint()).max_abs());
  }
  out.push_back(record_bound("gksl.duality", "trace pairing of the adjoint",
                             pairing, tol_of(opt, "gksl.duality", 1e-12)));
  out.push_back(record_bound("gksl.trace_preservation",
                             "generator annihilates the trace", trace,
                             tol_of(opt, "gksl.trace_preservation", 1e-12)));
  out.push_back(record_bound("gksl.hermiticity",
                             "Hermiticity is preserved", herm,
                             tol_of(opt, "gksl.hermiticity", 1e-12)));
  out.push_back(record_bound(
      "gksl.unital", "adjoint annihilates the identity",
      gksl::heisenberg_apply(G, CMatrix::identity(d)).op_norm(),
      tol_of(opt, "gksl.unital", 1e-12)));

  {
    CMatrix rho = la::random_density(rng, d);
    CMatrix once = gksl::evolve(G, rho, 1.7);
    CMatrix twice = gksl::evolve(G, gksl::evolve(G, rho, 0.9), 0.8);
    out.push_back(record_bound("gksl.semigroup", "composition law",
                               (once - twice).max_abs(),
                               tol_of(opt, "gksl.semigroup", 1e-9)));
  }

  bool cp = true;
  for (double t : {0.1, 1.0, 10.0})
    cp = cp && gksl::cp_check(G, t, tol_of(opt, "gksl.cp", 1e-10));
  out.push_back(record_flag("gksl.cp", "Choi positivity of the semigroup",
                            cp));

  auto kernel = gksl::kernel_of_adjoint(G, tol_of(opt, "gksl.kernel", 1e-9));
  auto it = m.expected.find("kernel_dim");
  if (it != m.expected.end()) {
    out.push_back(record_flag(
        "gksl.kernel_dim", "dimension of the conserved-observable space",
        kernel.size() == static_cast<std::size_t>(it->second),
        "dim " + std::to_string(kernel.size())));
  }

  bool commutant = true;
  for (const auto& I : m.quantum.integrals)
    commutant = commutant && gksl::commutant_membership(G, I);
  out.push_back(record_flag("gksl.commutant",
                            "integrals commute with the generator data",
                            commutant));

  auto rep = gksl::invariant_algebra_check(G, m.quantum.integrals);
  auto ad = m.expected.find("algebra_dim");
  bool dim_ok = ad == m.expected.end() ||
                rep.algebra_dim == static_cast<std::size_t>(ad->second);
  out.push_back(record_flag(
      "gksl.invariant_algebra",
      "unital algebra of the integrals sits in the kernel",
      rep.pass && dim_ok,
      "dim " + std::to_string(rep.algebra_dim) + ", residual " +
          report::format_sci(rep.max_kernel_residual)));

  if (m.name == "qubit_dephasing") {
    double omega = m.parameters.at("omega"), gamma = m.parameters.at("gamma");
    CMatrix expect = -2.0 * gamma * la::sigma_x() - omega * la::sigma_y();
    out.push_back(record_bound(
        "gksl.adjoint_sigma_x",
        "adjoint action on sigma_x (coefficient -2 gamma)",
        (gksl::heisenberg_apply(G, la::sigma_x()) - expect).max_abs(),
        tol_of(opt, "gksl.adjoint_sigma_x", 1e-12)));

    double worst = 0.0;
    for (double t = 0.0; t <= 5.0; t += 0.25) {
      CMatrix xt = gksl::evolve_heisenberg(G, la::sigma_x(), t);
      CMatrix ref = std::exp(-2.0 * gamma * t) *
                    (std::cos(omega * t) * la::sigma_x() -
                     std::sin(omega * t) * la::sigma_y());
      worst = std::max(worst, (xt - ref).max_abs());
    }
    out.push_back(record_bound("gksl.sigma_x_decay",
                               "evolved observable closed form", worst,
                               tol_of(opt, "gksl.sigma_x_decay", 1e-9)));
  }

  return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckRecord> pencil_quantum_suite(const ModelFixture& m,
                                              const RunOptions& opt) {
  std::vector<CheckRecord> out;
  if (!m.quantum.g0 || !m.quantum.g1) {
    out.push_back({"pq", "", "skip", 0, 0, "no generator pair"});
    return out;
  }
  const auto& G0 = *m.quantum.g0;
  const auto& G1 = *m.quantum.g1;
  std::vector<double> lambdas = {0.0, 0.25, 0.5, 0.75, 1.0};

  auto rep = gksl::bilindblad_check(G0, G1, m.quantum.integrals, lambdas);
  double worst = 0.0;
  bool cp = true;
  for (const auto& pt : rep.points) {
    worst = std::max(worst, pt.max_integral_residual);
    cp = cp && pt.cptp_ok;
  }
  out.push_back(record_flag("pq.cptp", "complete positivity along the pencil",
                            cp));
  out.push_back(record_bound("pq.integrals",
                             "common integrals are annihilated", worst,
                             tol_of(opt, "pq.integrals", 1e-10)));

  auto S0 = gksl::to_superoperator(G0, gksl::Picture::Schrodinger);
  auto S1 = gksl::to_superoperator(G1, gksl::Picture::Schrodinger);
  double affinity = 0.0;
  for (double lam : lambdas) {
    auto Sl = gksl::to_superoperator(gksl::convex_combine(G0, G1, lam),
                                     gksl::Picture::Schrodinger);
    CMatrix expect = (1.0 - lam) * S0.matrix + lam * S1.matrix;
    affinity = std::max(affinity, (Sl.matrix - expect).max_abs());
  }
  out.push_back(record_bound("pq.affinity",
                             "superoperator is affine in lambda", affinity,
                             tol_of(opt, "pq.affinity", 1e-12)));

  if (m.name == "qubit_pencil") {
    double w0 = m.parameters.at("omega0"), w1 = m.parameters.at("omega1");
    double gamma = m.parameters.at("gamma");
    auto mid = gksl::convex_combine(G0, G1, 0.5);
    bool mid_ok =
        (mid.H - ((w0 + w1) / 4.0) * la::sigma_z()).max_abs() < 1e-14 &&
        mid.lindblads.size() == 1 &&
        (mid.lindblads[0] - std::sqrt(gamma / 2.0) * la::sigma_z())
                .max_abs() < 1e-14;
    out.push_back(record_flag("pq.midpoint",
                              "midpoint Hamiltonian and single channel",
                              mid_ok));

    CMatrix expect = -w0 * la::sigma_y();
    out.push_back(record_bound(
        "pq.unitary_leg", "purely unitary branch on sigma_x",
        (gksl::heisenberg_apply(G0, la::sigma_x()) - expect).max_abs(),
        tol_of(opt, "pq.unitary_leg", 1e-12)));
  }

  return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckRecord> dephasing_suite(const ModelFixture& m,
                                         const RunOptions& opt,
                                         std::vector<gksl::CoherenceRow>& rows,
                                         bool& have_rows) {
  std::vector<CheckRecord> out;
  if (!m.quantum.g0 || m.quantum.integrals.empty()) {
    out.push_back({"deph", "", "skip", 0, 0, "no sector data"});
    return out;
  }
  const auto& G = *m.quantum.g0;
  const std::size_t d = G.dim();

  auto sectors = gksl::joint_sectors(m.quantum.integrals);
  auto sc = m.expected.find("sector_count");
  if (sc != m.expected.end())
    out.push_back(record_flag(
        "deph.sector_count", "number of joint sectors",
        sectors.sectors.size() == static_cast<std::size_t>(sc->second),
        std::to_string(sectors.sectors.size()) + " sectors"));

  // Fully coherent pure initial state populates every block.
  CMatrix rho0(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      rho0(i, j) = 1.0 / static_cast<double>(d);

  rows = gksl::coherence_trajectory(G, rho0, sectors, opt.times);
  have_rows = true;

  double rel = 0.0, diag = 0.0;
  bool valid = true;
  for (const auto& row : rows) {
    valid = valid && row.prediction_valid;
    if (row.nu == row.mu) {
      diag = std::max(diag, row.diag_drift);
    } else if (row.predicted_norm > 1e-14) {
      rel = std::max(rel, std::abs(row.block_norm - row.predicted_norm) /
                              row.predicted_norm);
    }
  }
  out.push_back(record_flag("deph.hamiltonian_scalar",
                            "Hamiltonian acts as a sector scalar", valid));
  out.push_back(record_bound("deph.offdiagonal",
                             "exponential decay at the predicted rates", rel,
                             tol_of(opt, "deph.offdiagonal", 1e-8)));
  out.push_back(record_bound("deph.diagonal",
                             "populations are invariant", diag,
                             tol_of(opt, "deph.diagonal", 1e-10)));

  if (m.name == "qubit_dephasing") {
    double gamma = m.parameters.at("gamma");
    auto rates = gksl::dephasing_rates(G, sectors);
    out.push_back(record_bound("deph.rate_value",
                               "qubit rate equals 2 gamma",
                               std::abs(rates[0][1] - 2.0 * gamma),
                               tol_of(opt, "deph.rate_value", 1e-12)));
  }

  return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckRecord> egorov_suite(const ModelFixture& m,
                                      const RunOptions& opt,
                                      moyal::EgorovSweep& sweep,
                                      bool& has_sweep) {
  std::vector<CheckRecord> out;
  if (!m.weyl) {
    out.push_back({"egorov", "", "skip", 0, 0, "no symbol data"});
    return out;
  }
  const auto& w = *m.weyl;
  std::vector<double> hbars = opt.hbars.empty() ? w.hbars : opt.hbars;

  moyal::EgorovModel model{w.hamiltonian, w.observable, w.lindblads};
  sweep = moyal::egorov_sweep(model, hbars, w.truncation, w.margin);
  has_sweep = true;

  out.push_back(record_flag(
      "egorov.slope", "log-log slope of the semiclassical residual",
      sweep.slope_valid && sweep.slope > 1.8 && sweep.slope < 2.2,
      "slope " + report::format_sci(sweep.slope)));

  // Dissipator action on the observable: exact quadratic contraction.
  double worst = 0.0;
  for (const auto& pt : sweep.points) {
    moyal::WeylQuantizer q(w.truncation, pt.hbar);
    CMatrix Xop = q.quantize(w.observable).matrix;
    std::vector<CMatrix> Ls;
    for (const auto& [sym_, rate] : w.lindblads)
      Ls.push_back(std::sqrt(rate) * q.quantize(sym_).matrix);
    gksl::GKSLGenerator D(pt.hbar, CMatrix::zero(w.truncation), Ls);
    double gamma = w.lindblads.empty() ? 0.0 : w.lindblads[0].second;
    CMatrix want = (-gamma * pt.hbar * pt.hbar / 2.0) * Xop;
    worst = std::max(worst,
                     moyal::interior_mask(gksl::heisenberg_apply(D, Xop) -
                                              want,
                                          w.margin)
                         .op_norm());
  }
  out.push_back(record_bound("egorov.dissipator",
                             "quadratic contraction of the channel", worst,
                             tol_of(opt, "egorov.dissipator", 1e-10)));

  // The Hamiltonian itself is transported exactly.
  moyal::EgorovModel cc1{w.hamiltonian, w.hamiltonian, w.lindblads};
  auto s1 = moyal::egorov_sweep(cc1, hbars, w.truncation, w.margin);
  double w1 = 0.0;
  for (const auto& pt : s1.points) w1 = std::max(w1, pt.ratio);
  out.push_back(record_bound("egorov.integral_exact",
                             "residual vanishes on the integral itself", w1,
                             tol_of(opt, "egorov.integral_exact", 1e-10)));

  return out;
}

}  // namespace

SuiteOutputs run_suite(const models::ModelFixture& model,
                       const RunOptions& options) {
  SuiteOutputs out;
  auto wants = [&](const std::string& s) {
    if (!options.suites.empty())
      return std::find(options.suites.begin(), options.suites.end(), s) !=
             options.suites.end();
    return std::find(model.suites.begin(), model.suites.end(), s) !=
           model.suites.end();
  };

  for (const std::string& s :
       {"pencil", "contact", "gksl", "pencil-quantum", "dephasing",
        "egorov"}) {
    if (!wants(s)) continue;
    if (s == "pencil") out.report.extend(pencil_suite(model, options));
    if (s == "contact") out.report.extend(contact_suite(model, options));
    if (s == "gksl") out.report.extend(gksl_suite(model, options));
    if (s == "pencil-quantum")
      out.report.extend(pencil_quantum_suite(model, options));
    if (s == "dephasing")
      out.report.extend(dephasing_suite(model, options, out.coherences,
                                        out.has_coherences));
    if (s == "egorov")
      out.report.extend(egorov_suite(model, options, out.sweep,
                                     out.has_sweep));
  }
  return out;
}

}  // namespace bilindblad::suites
