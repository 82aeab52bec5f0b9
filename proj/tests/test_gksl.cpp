#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bilindblad/gksl.hpp"
#include "bilindblad/sectors.hpp"

using namespace bilindblad::gksl;
using bilindblad::la::CMatrix;
using bilindblad::la::cplx;
using bilindblad::la::sigma_x;
using bilindblad::la::sigma_y;
using bilindblad::la::sigma_z;

namespace {

GKSLGenerator qubit_dephasing(double omega, double gamma, double hbar = 1.0) {
  CMatrix H = (hbar * omega / 2.0) * sigma_z();
  CMatrix L = std::sqrt(gamma) * sigma_z();
  return GKSLGenerator(hbar, H, {L});
}

GKSLGenerator random_generator(std::mt19937_64& rng, std::size_t dim,
                               std::size_t channels) {
  CMatrix H = bilindblad::la::random_hermitian(rng, dim);
  std::vector<CMatrix> Ls;
  for (std::size_t k = 0; k < channels; ++k)
    Ls.push_back(bilindblad::la::random_matrix(rng, dim));
  return GKSLGenerator(1.0, H, Ls);
}

}  // namespace

TEST_CASE("generator validation") {
  CMatrix notherm(2);
  notherm(0, 1) = 1.0;
  CHECK_THROWS_AS(GKSLGenerator(1.0, notherm, {}), GKSLError);
  CHECK_THROWS_AS(GKSLGenerator(-1.0, sigma_z(), {}), GKSLError);
  CHECK_THROWS_AS(GKSLGenerator(1.0, CMatrix::identity(65), {}), GKSLError);
}

TEST_CASE("Schrodinger-picture action on the dephasing qubit") {
  double omega = 1.3, gamma = 0.7;
  auto G = qubit_dephasing(omega, gamma);

  // rho = (1 + sigma_x)/2 maps to (omega/2) sigma_y - gamma sigma_x.
  CMatrix rho = 0.5 * (CMatrix::identity(2) + sigma_x());
  CMatrix expected = (omega / 2.0) * sigma_y() - gamma * sigma_x();
  CHECK((lindblad_apply(G, rho) - expected).max_abs() < 1e-14);

  // Maximally mixed state with no dissipators is stationary.
  GKSLGenerator unitary(1.0, G.H, {});
  CMatrix mixed = 0.5 * CMatrix::identity(2);
  CHECK(lindblad_apply(unitary, mixed).max_abs() < 1e-15);

  // Diagonal states are stationary under pure dephasing.
  CMatrix diag_state = 0.5 * (CMatrix::identity(2) + sigma_z());
  CHECK(lindblad_apply(G, diag_state).max_abs() < 1e-14);

  // Trace annihilation and Hermiticity preservation.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    CMatrix r = bilindblad::la::random_density(rng, 2);
    CMatrix out = lindblad_apply(G, r);
    CHECK(std::abs(out.trace()) < 1e-12);
    CHECK(out.is_hermitian(1e-12));
  }
}

TEST_CASE("Heisenberg adjoint on the dephasing qubit") {
  double omega = 0.9, gamma = 0.4;
  auto G = qubit_dephasing(omega, gamma);
  CHECK(heisenberg_apply(G, sigma_z()).max_abs() < 1e-14);
  CHECK(heisenberg_apply(G, CMatrix::identity(2)).max_abs() < 1e-14);
  CMatrix expected = -2.0 * gamma * sigma_x() - omega * sigma_y();
  CHECK((heisenberg_apply(G, sigma_x()) - expected).max_abs() < 1e-13);
}

TEST_CASE("trace pairing duality") {
  std::mt19937_64 rng(11);
  auto G = qubit_dephasing(1.0, 0.5);
  for (int i = 0; i < 20; ++i) {
    CMatrix rho = bilindblad::la::random_density(rng, 2);
    CMatrix A = bilindblad::la::random_hermitian(rng, 2);
    CHECK(adjoint_pairing_residual(G, rho, A) < 1e-12);
  }
  auto G6 = random_generator(rng, 6, 3);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    CMatrix rho = bilindblad::la::random_density(rng, 6);
    CMatrix A = bilindblad::la::random_hermitian(rng, 6);
    worst = std::max(worst, adjoint_pairing_residual(G6, rho, A));
  }
  // Inputs are normalized (trace-one state, O(1) observable).
  CHECK(worst < 1e-12 * 100);
}

TEST_CASE("superoperator representation") {
  auto G = qubit_dephasing(1.1, 0.3);
  auto S = to_superoperator(G, Picture::Heisenberg);
  CHECK(S.matrix.dim() == 4);

  // Consistency with the direct application on random inputs.
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    CMatrix X = bilindblad::la::random_matrix(rng, 2);
    auto v = bilindblad::la::vec(X);
    std::vector<cplx> w(4, cplx{});
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) w[a] += S.matrix(a, b) * v[b];
    CMatrix direct = heisenberg_apply(G, X);
    CHECK((bilindblad::la::unvec(w, 2) - direct).max_abs() < 1e-12);
  }

  // vec(sigma_z) lies in the kernel.
  auto vz = bilindblad::la::vec(sigma_z());
  double norm = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    cplx acc = 0.0;
    for (std::size_t b = 0; b < 4; ++b) acc += S.matrix(a, b) * vz[b];
    norm = std::max(norm, std::abs(acc));
  }
  CHECK(norm < 1e-14);

  // Zero generator gives the zero matrix.
  GKSLGenerator Z(1.0, CMatrix::zero(2), {});
  CHECK(to_superoperator(Z, Picture::Schrodinger).matrix.max_abs() == 0.0);

  // Trace preservation: vec(1)^T M = 0 in the Schrodinger picture.
  auto Ssch = to_superoperator(G, Picture::Schrodinger);
  auto vi = bilindblad::la::vec(CMatrix::identity(2));
  for (std::size_t b = 0; b < 4; ++b) {
    cplx acc = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
      acc += std::conj(vi[a]) * Ssch.matrix(a, b);
    CHECK(std::abs(acc) < 1e-14);
  }
}

TEST_CASE("semigroup evolution") {
  double omega = 1.0, gamma = 0.5;
  auto G = qubit_dephasing(omega, gamma);
  std::mt19937_64 rng(17);
  CMatrix rho0 = bilindblad::la::random_density(rng, 2);

  CHECK((evolve(G, rho0, 0.0) - rho0).max_abs() < 1e-13);
  CHECK_THROWS_AS(evolve(G, rho0, -1.0), GKSLError);

  // Off-diagonal element rotates at omega and decays at 2 gamma.
  for (double t : {0.3, 1.0, 2.5}) {
    CMatrix rho_t = evolve(G, rho0, t);
    cplx expected = rho0(0, 1) * std::exp(cplx(-2.0 * gamma * t, -omega * t));
    CHECK(std::abs(rho_t(0, 1) - expected) < 1e-10);
    CHECK(std::abs(rho_t(0, 0) - rho0(0, 0)) < 1e-12);
    CHECK(std::abs(rho_t.trace() - rho0.trace()) < 1e-10);
    CHECK(rho_t.is_hermitian(1e-10));
    CHECK(rho_t.min_eigenvalue() > -1e-9);
  }

  // Heisenberg picture: sigma_x(t) = e^{-2 gamma t}(cos sigma_x - sin sigma_y).
  for (double t : {0.5, 1.7}) {
    CMatrix xt = evolve_heisenberg(G, sigma_x(), t);
    CMatrix ref = std::exp(-2.0 * gamma * t) *
                  (std::cos(omega * t) * sigma_x() -
                   std::sin(omega * t) * sigma_y());
    CHECK((xt - ref).max_abs() < 1e-10);
  }

  // Semigroup law.
  CMatrix one_step = evolve(G, rho0, 1.9);
  CMatrix two_step = evolve(G, evolve(G, rho0, 0.8), 1.1);
  CHECK((one_step - two_step).max_abs() < 1e-9);
}

TEST_CASE("kernel of the adjoint") {
  auto G = qubit_dephasing(1.0, 0.5);
  auto basis = kernel_of_adjoint(G);
  CHECK(basis.size() == 2);
  // The kernel contains the identity and sigma_z: project them onto the span.
  for (const CMatrix& target : {CMatrix::identity(2), sigma_z()}) {
    CMatrix residual = target;
    for (const auto& b : basis)
      residual = residual - bilindblad::la::hs_inner(b, residual) * b;
    CHECK(residual.max_abs() < 1e-9);
  }

  GKSLGenerator free(1.0, CMatrix::zero(3), {});
  CHECK(kernel_of_adjoint(free).size() == 9);

  // Hamiltonian-only generator with nondegenerate spectrum: the kernel is
  // the commutant of H, dimension d.
  std::mt19937_64 rng(23);
  CMatrix H = CMatrix::diag({cplx(0.1), cplx(0.7), cplx(1.9), cplx(3.1)});
  CMatrix U = bilindblad::la::random_matrix(rng, 4);
  // Make a unitary via QR of a random matrix: reuse Hermitian exponential.
  CMatrix herm = bilindblad::la::random_hermitian(rng, 4);
  U = bilindblad::la::matrix_exponential(cplx(0.0, 1.0) * herm);
  GKSLGenerator ham_only(1.0, U * H * U.adjoint(), {});
  auto kb = kernel_of_adjoint(ham_only);
  CHECK(kb.size() == 4);
  for (const auto& b : kb)
    CHECK(bilindblad::la::commutator(ham_only.H, b).op_norm() < 1e-8);
}

TEST_CASE("commutant membership") {
  auto G = qubit_dephasing(1.0, 0.5);
  CHECK(commutant_membership(G, sigma_z()));
  CHECK(commutant_membership(G, CMatrix::identity(2)));
  CHECK_FALSE(commutant_membership(G, sigma_x()));
}

TEST_CASE("invariant algebra report") {
  auto G = qubit_dephasing(1.0, 0.5);
  auto rep = invariant_algebra_check(G, {sigma_z()});
  CHECK(rep.algebra_dim == 2);
  CHECK(rep.pass);
  CHECK(rep.max_kernel_residual < 1e-12);

  auto scalars = invariant_algebra_check(G, {});
  CHECK(scalars.algebra_dim == 1);
  CHECK(scalars.pass);
}

TEST_CASE("convex combinations of generators") {
  double w0 = 0.8, w1 = 1.4, gamma = 0.6;
  GKSLGenerator G0(1.0, (w0 / 2.0) * sigma_z(), {});
  GKSLGenerator G1(1.0, (w1 / 2.0) * sigma_z(),
                   {std::sqrt(gamma) * sigma_z()});

  auto mid = convex_combine(G0, G1, 0.5);
  CHECK((mid.H - ((w0 + w1) / 4.0) * sigma_z()).max_abs() < 1e-15);
  REQUIRE(mid.lindblads.size() == 1);
  CHECK((mid.lindblads[0] - std::sqrt(gamma / 2.0) * sigma_z()).max_abs() <
        1e-15);

  // lambda = 0 reproduces G0 as a superoperator.
  auto S0 = to_superoperator(G0, Picture::Schrodinger);
  auto Sc = to_superoperator(convex_combine(G0, G1, 0.0),
                             Picture::Schrodinger);
  CHECK((S0.matrix - Sc.matrix).max_abs() < 1e-15);

  // Affinity over the pencil.
  auto S1 = to_superoperator(G1, Picture::Schrodinger);
  for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    auto Sl = to_superoperator(convex_combine(G0, G1, lam),
                               Picture::Schrodinger);
    CMatrix expect = (1.0 - lam) * S0.matrix + lam * S1.matrix;
    CHECK((Sl.matrix - expect).max_abs() < 1e-12);
    CHECK(heisenberg_apply(convex_combine(G0, G1, lam), sigma_z())
              .op_norm() < 1e-12);
  }
}

TEST_CASE("Choi matrices and complete positivity") {
  // Identity map: rank-one projector with unit eigenvalue.
  CMatrix idmap = CMatrix::identity(4);
  CMatrix C = choi_matrix(idmap, 2);
  auto ev = C.hermitian_eigenvalues();
  CHECK(ev.back() == doctest::Approx(1.0));
  CHECK(ev.front() == doctest::Approx(0.0).epsilon(1e-12));

  // Transpose map is positive but not completely positive: min eig -1/2.
  CMatrix T(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) T(i * 2 + j, j * 2 + i) = 1.0;
  CMatrix Ct = choi_matrix(T, 2);
  CHECK(Ct.min_eigenvalue() == doctest::Approx(-0.5));

  auto G = qubit_dephasing(1.0, 0.5);
  for (double t : {0.1, 1.0, 10.0}) CHECK(cp_check(G, t));
}

TEST_CASE("bi-Lindblad pencil report") {
  GKSLGenerator G0(1.0, 0.4 * sigma_z(), {});
  GKSLGenerator G1(1.0, 0.7 * sigma_z(), {std::sqrt(0.6) * sigma_z()});
  auto rep = bilindblad_check(G0, G1, {sigma_z()}, {0.0, 0.5, 1.0});
  CHECK(rep.pass);
  CHECK(rep.points.size() == 3);
  for (const auto& pt : rep.points) {
    CHECK(pt.cptp_ok);
    CHECK(pt.max_integral_residual < 1e-10);
  }

  auto same = bilindblad_check(G1, G1, {sigma_z()}, {0.3, 0.9});
  CHECK(same.pass);
}

TEST_CASE("joint sector decomposition") {
  CMatrix A = CMatrix::diag({cplx(1), cplx(1), cplx(2)});
  CMatrix B = CMatrix::diag({cplx(3), cplx(4), cplx(4)});
  auto dec = joint_sectors({A, B});
  REQUIRE(dec.sectors.size() == 3);
  CHECK(dec.sectors[0].nu == std::vector<double>{1.0, 3.0});
  CHECK(dec.sectors[1].nu == std::vector<double>{1.0, 4.0});
  CHECK(dec.sectors[2].nu == std::vector<double>{2.0, 4.0});
  for (const auto& s : dec.sectors) {
    CHECK(s.multiplicity == 1);
    CHECK((s.projector * s.projector - s.projector).max_abs() < 1e-12);
    CHECK(s.projector.is_hermitian(1e-12));
  }
  // Completeness and reconstruction.
  CMatrix sum(3), rec(3);
  for (const auto& s : dec.sectors) {
    sum = sum + s.projector;
    rec = rec + s.nu[0] * s.projector;
  }
  CHECK((sum - CMatrix::identity(3)).max_abs() < 1e-12);
  CHECK((rec - A).max_abs() < 1e-9);

  auto trivial = joint_sectors({CMatrix::identity(3)});
  CHECK(trivial.sectors.size() == 1);
  CHECK(trivial.sectors[0].multiplicity == 3);

  auto pauli = joint_sectors({sigma_z()});
  REQUIRE(pauli.sectors.size() == 2);
  CHECK(pauli.sectors[0].nu[0] == doctest::Approx(-1.0));
  CHECK(pauli.sectors[1].nu[0] == doctest::Approx(1.0));

  CHECK_THROWS_AS(joint_sectors({sigma_x(), sigma_z()}), GKSLError);
}

TEST_CASE("dephasing rates") {
  auto sec = joint_sectors({sigma_z()});

  double a = 1.5, b = -0.25;
  GKSLGenerator G(1.0, CMatrix::zero(2),
                  {CMatrix::diag({cplx(a), cplx(b)})});
  auto rates = dephasing_rates(G, sec);
  CHECK(rates[0][1] == doctest::Approx(0.5 * (a - b) * (a - b)));
  CHECK(rates[0][0] == 0.0);

  GKSLGenerator scalarL(1.0, CMatrix::zero(2),
                        {cplx(0.7) * CMatrix::identity(2)});
  auto r0 = dephasing_rates(scalarL, sec);
  CHECK(r0[0][1] == doctest::Approx(0.0));

  double gamma = 0.8;
  GKSLGenerator Gz(1.0, CMatrix::zero(2), {std::sqrt(gamma) * sigma_z()});
  auto rz = dephasing_rates(Gz, sec);
  CHECK(rz[0][1] == doctest::Approx(2.0 * gamma));

  // Non-scalar channel is rejected with a named precondition error.
  GKSLGenerator bad(1.0, CMatrix::zero(2), {sigma_x()});
  CHECK_THROWS_AS(dephasing_rates(bad, sec), GKSLError);
}

TEST_CASE("coherence trajectories match the closed form") {
  double omega = 1.0, gamma = 0.5;  // rate 2 gamma = 1
  auto G = GKSLGenerator(1.0, (omega / 2.0) * sigma_z(),
                         {std::sqrt(gamma) * sigma_z()});
  auto sec = joint_sectors({sigma_z()});
  std::mt19937_64 rng(31);
  CMatrix rho0 = bilindblad::la::random_density(rng, 2);

  auto rows = coherence_trajectory(G, rho0, sec, {0.5, 1.0, 2.0});
  for (const auto& row : rows) {
    REQUIRE(row.prediction_valid);
    if (row.nu == row.mu) {
      CHECK(row.diag_drift < 1e-10);
    } else {
      CHECK(row.block_norm ==
            doctest::Approx(row.predicted_norm).epsilon(1e-8));
    }
  }

  // Block-diagonal initial states keep zero off-diagonal norms.
  CMatrix diag0 = 0.5 * (CMatrix::identity(2) + 0.4 * sigma_z());
  for (const auto& row : coherence_trajectory(G, diag0, sec, {0.7})) {
    if (row.nu != row.mu) CHECK(row.block_norm < 1e-12);
  }
}

TEST_CASE("functional calculus over sectors") {
  CMatrix A = CMatrix::diag({cplx(1), cplx(1), cplx(2)});
  CMatrix B = CMatrix::diag({cplx(3), cplx(4), cplx(4)});
  auto dec = joint_sectors({A, B});

  auto first = functional_calculus(
      dec, [](const std::vector<double>& nu) { return cplx(nu[0]); });
  CHECK((first - A).max_abs() < 1e-9);

  auto constant = functional_calculus(
      dec, [](const std::vector<double>&) { return cplx(2.5); });
  CHECK((constant - 2.5 * CMatrix::identity(3)).max_abs() < 1e-12);

  auto sum = functional_calculus(
      dec, [](const std::vector<double>& nu) { return cplx(nu[0] + nu[1]); });
  CHECK((sum - CMatrix::diag({cplx(4), cplx(5), cplx(6)})).max_abs() < 1e-9);

  // Output commutes with the inputs.
  CHECK(bilindblad::la::commutator(sum, A).op_norm() < 1e-10);
  CHECK(bilindblad::la::commutator(sum, B).op_norm() < 1e-10);
}
