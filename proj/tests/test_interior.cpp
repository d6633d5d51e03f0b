// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "heatkern/algebra.hpp"
#include "heatkern/interior.hpp"
#include "test_helpers.hpp"

using namespace heatkern;
using namespace heatkern::testing;

namespace {

std::mt19937 rng(32123);

CMatrix random_hermitian(int dim) {
  std::normal_distribution<double> dist(0.0, 1.0);
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      m(i, j) = Complex(dist(rng), dist(rng));
    }
  }
  return 0.5 * (m + m.adjoint());
}

} // namespace

TEST_CASE("exp_jet: derivatives match finite differences of the exponential") {
  // One-dimensional jet H(delta) = H0 + delta H1 + delta^2/2 H2.
  const CMatrix h0 = random_hermitian(2) + 3.0 * CMatrix::Identity(2, 2);
  const CMatrix h1 = random_hermitian(2);
  const CMatrix h2 = random_hermitian(2);
  MatJet h;
  h.order = 2;
  h.n = 1;
  h.value = h0;
  h.first = {h1};
  h.second = {{h2}};

  const double tau = 0.8;
  const MatJet e = exp_jet(h, tau, 2, VolterraSpec{24});

  auto exp_at = [&](double delta) {
    return matrix_exp(-tau * (h0 + delta * h1 + 0.5 * delta * delta * h2));
  };
  const double d1 = 1e-5;
  const CMatrix fd_first = (exp_at(d1) - exp_at(-d1)) / (2.0 * d1);
  CHECK(max_abs(e.value - exp_at(0.0)) < 1e-13);
  CHECK(max_abs(e.first[0] - fd_first) < 1e-8);

  const double d2 = 1e-3;
  const CMatrix fd_second_a =
      (exp_at(d2) - 2.0 * exp_at(0.0) + exp_at(-d2)) / (d2 * d2);
  const CMatrix fd_second_b =
      (exp_at(2 * d2) - 2.0 * exp_at(0.0) + exp_at(-2 * d2)) / (4.0 * d2 * d2);
  const CMatrix fd_second = (4.0 * fd_second_a - fd_second_b) / 3.0;
  CHECK(max_abs(e.second[0][0] - fd_second) < 1e-7);
}

TEST_CASE("jet_inverse: matches the inverse of a perturbed matrix") {
  const CMatrix r0 = random_hermitian(2) + 3.0 * CMatrix::Identity(2, 2);
  const CMatrix r1 = random_hermitian(2);
  const CMatrix r2 = random_hermitian(2);
  MatJet r;
  r.order = 2;
  r.n = 1;
  r.value = r0;
  r.first = {r1};
  r.second = {{r2}};
  const MatJet inv = jet_inverse(r);

  auto inv_at = [&](double delta) {
    return (r0 + delta * r1 + 0.5 * delta * delta * r2).inverse().eval();
  };
  const double d = 1e-5;
  CHECK(max_abs(inv.first[0] - (inv_at(d) - inv_at(-d)) / (2.0 * d)) < 1e-8);
  const double d2 = 1e-3;
  CHECK(max_abs(inv.second[0][0] -
                (inv_at(d2) - 2.0 * inv_at(0.0) + inv_at(-d2)) / (d2 * d2)) <
        1e-6);
}

TEST_CASE("compute_a0: Clifford symbol integrates to the fiber dimension") {
  const DiracSymbol sym = clifford_symbol();
  InteriorOptions opts;
  opts.xi_order = 12;
  const DensityResult a0 = compute_a0(sym, vec2(0.1, -0.2), opts);
  CHECK(a0.value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(a0.warnings.empty());
}

TEST_CASE("a0_integral: block scalar speeds") {
  // H = diag(|xi|^2, 4 |xi|^2) in two dimensions: a0 = 1 + 1/4. The scalar
  // proxy metric is (1+4)/2 = 2.5 times the identity.
  auto h_of = [](const RVector &xi) {
    CMatrix h = CMatrix::Zero(2, 2);
    h(0, 0) = xi.squaredNorm();
    h(1, 1) = 4.0 * xi.squaredNorm();
    return h;
  };
  const XiQuadrature quad =
      make_xi_quadrature(2.5 * RMatrix::Identity(2, 2), 24);
  CHECK(a0_integral(h_of, quad) == doctest::Approx(1.25).epsilon(1e-8));
}

TEST_CASE("compute_a0: self-convergence for a non-scalar elliptic symbol") {
  // Gamma^2 = sigma_y + 0.1 I: branch widths (1 +- 0.1)^2, close enough to
  // the whitened Gaussian for 12-vs-16 node agreement below 1e-6.
  std::vector<MatrixField> gamma = {
      MatrixField::constant(2, pauli_x()),
      MatrixField::constant(2, pauli_y() + 0.1 * CMatrix::Identity(2, 2))};
  const DiracSymbol sym = make_dirac_symbol(
      2, 2, std::move(gamma), MatrixField::constant(2, CMatrix::Identity(2, 2)),
      {}, vec2(-1, -1), vec2(1, 1));
  InteriorOptions lo, hi;
  lo.xi_order = 12;
  lo.estimate_error = false;
  hi.xi_order = 16;
  hi.estimate_error = false;
  const double v12 = compute_a0(sym, vec2(0, 0), lo).value;
  const double v16 = compute_a0(sym, vec2(0, 0), hi).value;
  CHECK(std::abs(v12 - v16) < 1e-6);
}

TEST_CASE("compute_a0: invariance under constant gauge conjugation") {
  // U Gamma U^H with a fixed unitary U: trace-cyclic quantities unchanged.
  const CMatrix h = random_hermitian(2);
  const HermitianEig eig = hermitian_eig(h);
  const CMatrix u = eig.eigenvectors;
  auto conjugated = [&](const CMatrix &g) { return (u * g * u.adjoint()).eval(); };

  std::vector<MatrixField> gamma1 = {
      MatrixField::constant(2, pauli_x()),
      MatrixField::constant(2, pauli_y() + 0.3 * CMatrix::Identity(2, 2))};
  std::vector<MatrixField> gamma2 = {
      MatrixField::constant(2, conjugated(pauli_x())),
      MatrixField::constant(
          2, conjugated(pauli_y() + 0.3 * CMatrix::Identity(2, 2)))};
  const DiracSymbol sym1 = make_dirac_symbol(
      2, 2, std::move(gamma1), MatrixField::constant(2, CMatrix::Identity(2, 2)),
      {}, vec2(-1, -1), vec2(1, 1));
  const DiracSymbol sym2 = make_dirac_symbol(
      2, 2, std::move(gamma2), MatrixField::constant(2, CMatrix::Identity(2, 2)),
      {}, vec2(-1, -1), vec2(1, 1));
  InteriorOptions opts;
  opts.estimate_error = false;
  const double a = compute_a0(sym1, vec2(0, 0), opts).value;
  const double b = compute_a0(sym2, vec2(0, 0), opts).value;
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("check_a1: odd integrand cancels") {
  InteriorOptions opts;
  opts.xi_order = 8;
  opts.simplex_order = 12;
  SUBCASE("constant Clifford symbol") {
    const double r = check_a1(clifford_symbol(), vec2(0.0, 0.0), opts);
    CHECK(r < 1e-10);
  }
  SUBCASE("x-dependent scalar symbol") {
    const DiracSymbol sym = rho_polynomial_symbol({1.0, 0.3, 0.35});
    const double a0 = compute_a0(sym, box1(0.0), opts).value;
    const double r = check_a1(sym, box1(0.0), opts);
    CHECK(r < 1e-8 * a0);
  }
}

TEST_CASE("compute_a2: flat operator vanishes") {
  const DiracSymbol sym = rho_polynomial_symbol({1.0});
  InteriorOptions opts;
  opts.xi_order = 10;
  opts.simplex_order = 16;
  opts.estimate_error = false;
  const DensityResult a2 = compute_a2(sym, box1(0.0), jets_at(sym, box1(0.0)), opts);
  CHECK(std::abs(a2.value) < 1e-10);
}

TEST_CASE("compute_a2: scalar potential from the measure density") {
  InteriorOptions opts;
  opts.xi_order = 12;
  opts.simplex_order = 20;
  opts.estimate_error = false;
  SUBCASE("pure second-order coefficient") {
    // rho = 1 + 0.35 x^2: DbarD = -d^2 + V with V(0) = rho''(0) = 0.7.
    const DiracSymbol sym = rho_polynomial_symbol({1.0, 0.0, 0.35});
    const DensityResult a2 =
        compute_a2(sym, box1(0.0), jets_at(sym, box1(0.0)), opts);
    CHECK(a2.value == doctest::Approx(-0.7).epsilon(1e-6));
  }
  SUBCASE("first-order jet contributions cancel in the density") {
    // rho' != 0 at the point exercises the K-term cancellations;
    // V(0) = rho''(0)/rho(0) = 0.7 still.
    const DiracSymbol sym = rho_polynomial_symbol({1.0, 0.3, 0.35});
    const DensityResult a2 =
        compute_a2(sym, box1(0.0), jets_at(sym, box1(0.0)), opts);
    CHECK(a2.value == doctest::Approx(-0.7).epsilon(1e-6));
  }
  SUBCASE("off-center evaluation point") {
    // V(x) = rho''/rho = 0.7 / (1 + 0.35 x^2).
    const DiracSymbol sym = rho_polynomial_symbol({1.0, 0.0, 0.35});
    const double x0 = 0.4;
    const DensityResult a2 =
        compute_a2(sym, box1(x0), jets_at(sym, box1(x0)), opts);
    const double expected = -0.7 / (1.0 + 0.35 * x0 * x0);
    CHECK(a2.value == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("compute_a2: pure-gauge connection has vanishing density") {
  // In one dimension any anti-self-adjoint connection is locally a gauge
  // transform of zero, and the heat kernel diagonal trace is gauge
  // invariant, so the density must vanish.
  SUBCASE("scalar connection") {
    std::vector<MatrixField::PolyTerm> terms(2);
    terms[0].exponents = {0};
    terms[0].coeff = Complex(0.0, 0.4) * CMatrix::Identity(1, 1);
    terms[1].exponents = {1};
    terms[1].coeff = Complex(0.0, 0.3) * CMatrix::Identity(1, 1);
    std::vector<MatrixField> gamma = {
        MatrixField::constant(1, CMatrix::Identity(1, 1))};
    std::vector<MatrixField> conn = {
        MatrixField::polynomial(1, 1, std::move(terms))};
    const DiracSymbol sym = make_dirac_symbol(
        1, 1, std::move(gamma), MatrixField::constant(1, CMatrix::Identity(1, 1)),
        std::move(conn), box1(-1.0), box1(1.0));
    InteriorOptions opts;
    opts.xi_order = 12;
    opts.simplex_order = 20;
    opts.estimate_error = false;
    const DensityResult a2 =
        compute_a2(sym, box1(0.0), jets_at(sym, box1(0.0)), opts);
    CHECK(std::abs(a2.value) < 1e-8);
  }
  SUBCASE("non-abelian connection") {
    std::vector<MatrixField::PolyTerm> terms(2);
    terms[0].exponents = {0};
    terms[0].coeff = Complex(0.0, 0.4) * pauli_x();
    terms[1].exponents = {1};
    terms[1].coeff = Complex(0.0, 0.25) * pauli_z();
    std::vector<MatrixField> gamma = {
        MatrixField::constant(1, CMatrix::Identity(2, 2))};
    std::vector<MatrixField> conn = {
        MatrixField::polynomial(1, 2, std::move(terms))};
    const DiracSymbol sym = make_dirac_symbol(
        1, 2, std::move(gamma), MatrixField::constant(1, CMatrix::Identity(2, 2)),
        std::move(conn), box1(-1.0), box1(1.0));
    InteriorOptions opts;
    opts.xi_order = 12;
    opts.simplex_order = 20;
    opts.estimate_error = false;
    const DensityResult a2 =
        compute_a2(sym, box1(0.0), jets_at(sym, box1(0.0)), opts);
    CHECK(std::abs(a2.value) < 1e-8);
  }
}

TEST_CASE("compute_a2: direct sum splits into block densities") {
  // rho = diag(1 + x^2/2, 1 + x^2): potentials 1 and 2, densities -1 and -2.
  std::vector<MatrixField::PolyTerm> terms(2);
  terms[0].exponents = {0};
  terms[0].coeff = CMatrix::Identity(2, 2);
  terms[1].exponents = {2};
  terms[1].coeff = CMatrix::Zero(2, 2);
  terms[1].coeff(0, 0) = 0.5;
  terms[1].coeff(1, 1) = 1.0;
  std::vector<MatrixField> gamma = {
      MatrixField::constant(1, CMatrix::Identity(2, 2))};
  const DiracSymbol sym = make_dirac_symbol(
      1, 2, std::move(gamma), MatrixField::polynomial(1, 2, std::move(terms)), {},
      box1(-1.0), box1(1.0));

  InteriorOptions opts;
  opts.xi_order = 12;
  opts.simplex_order = 20;
  opts.estimate_error = false;
  const DensityResult a2 =
      compute_a2(sym, box1(0.0), jets_at(sym, box1(0.0)), opts);
  CHECK(a2.value == doctest::Approx(-3.0).epsilon(1e-6));

  const DiracSymbol block1 = rho_polynomial_symbol({1.0, 0.0, 0.5});
  const DiracSymbol block2 = rho_polynomial_symbol({1.0, 0.0, 1.0});
  const double sum =
      compute_a2(block1, box1(0.0), jets_at(block1, box1(0.0)), opts).value +
      compute_a2(block2, box1(0.0), jets_at(block2, box1(0.0)), opts).value;
  CHECK(a2.value == doctest::Approx(sum).epsilon(1e-6));
}

TEST_CASE("compute_a2: deterministic across worker counts") {
  const DiracSymbol sym = rho_polynomial_symbol({1.0, 0.3, 0.35});
  InteriorOptions serial, parallel;
  serial.xi_order = 8;
  serial.simplex_order = 12;
  serial.estimate_error = false;
  parallel = serial;
  parallel.threads = 4;
  const JetData jets = jets_at(sym, box1(0.0));
  const double a = compute_a2(sym, box1(0.0), jets, serial).value;
  const double b = compute_a2(sym, box1(0.0), jets, parallel).value;
  CHECK(a == b); // bit-identical by ordered reduction
}
