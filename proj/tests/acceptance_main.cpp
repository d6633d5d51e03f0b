// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// the measured numbers; the process exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "heatkern/algebra.hpp"
#include "heatkern/boundary.hpp"
#include "heatkern/finsler.hpp"
#include "heatkern/interior.hpp"
#include "heatkern/oracle.hpp"
#include "test_helpers.hpp"

using namespace heatkern;
using namespace heatkern::testing;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string &label,
            const std::string &detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
              label.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) {
    ++failures;
  }
}

std::string fmt(const char *pattern, double a, double b = 0.0, double c = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), pattern, a, b, c);
  return buffer;
}

std::mt19937 rng(8675309);

CMatrix random_hermitian(int dim, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      m(i, j) = Complex(dist(rng), dist(rng));
    }
  }
  return 0.5 * (m + m.adjoint());
}

// Random anticommuting pair: A = U (sigma_x x D1) U^H, C = U (sigma_z x D2) U^H
// with diagonal D1 (invertible), D2; every B = 0 split arises this way.
void random_anticommuting(int half, CMatrix &a, CMatrix &c) {
  std::uniform_real_distribution<double> mag(0.4, 2.0);
  std::uniform_real_distribution<double> sym(-1.5, 1.5);
  const int dim = 2 * half;
  CMatrix d1 = CMatrix::Zero(dim, dim), d2 = CMatrix::Zero(dim, dim);
  for (int i = 0; i < half; ++i) {
    const double s = mag(rng) * (rng() % 2 ? 1.0 : -1.0);
    d1(i, half + i) = s;
    d1(half + i, i) = s;
    const double t = sym(rng);
    d2(i, i) = t;
    d2(half + i, half + i) = -t;
  }
  const HermitianEig basis = hermitian_eig(random_hermitian(dim));
  a = basis.eigenvectors * d1 * basis.eigenvectors.adjoint();
  c = basis.eigenvectors * d2 * basis.eigenvectors.adjoint();
}

BoundarySplit split_of(const CMatrix &a, const CMatrix &c) {
  BoundarySplit split;
  split.A = a;
  split.C = c;
  split.B = a * c + c * a;
  RVector xi(1);
  xi << 1.0;
  split.xi_hat = xi;
  return split;
}

// --- criterion 1: Dirichlet-Laplacian limit of A1 ---------------------------

void criterion_1() {
  // Disk: Clifford symbol, unit circle boundary, A1 = -2 pi^{3/2}.
  const DiracSymbol disk_sym = clifford_symbol();
  const int points = 24;
  std::vector<BoundaryMeshPoint> mesh(points);
  for (int k = 0; k < points; ++k) {
    const double theta = 2.0 * M_PI * k / points;
    mesh[k].chart.point = vec2(std::cos(theta), std::sin(theta));
    mesh[k].chart.dr = vec2(-std::cos(theta), -std::sin(theta));
    mesh[k].chart.dxhat = {vec2(-std::sin(theta), std::cos(theta))};
    mesh[k].weight = 2.0 * M_PI / points;
  }
  const A1Result disk = compute_A1(disk_sym, mesh);
  const double disk_expected = -2.0 * std::pow(M_PI, 1.5);
  const double disk_rel = std::abs(disk.value - disk_expected) / std::abs(disk_expected);

  // Interval: N = 2 scalar-gamma symbol, two endpoints, A1 = -sqrt(pi) N.
  std::vector<MatrixField> gamma = {
      MatrixField::constant(1, CMatrix::Identity(2, 2))};
  const DiracSymbol interval_sym = make_dirac_symbol(
      1, 2, std::move(gamma), MatrixField::constant(1, CMatrix::Identity(2, 2)),
      {}, box1(0.0), box1(1.0));
  std::vector<BoundaryMeshPoint> ends(2);
  ends[0].chart.point = box1(0.0);
  ends[0].chart.dr = box1(1.0);
  ends[0].weight = 1.0;
  ends[1].chart.point = box1(1.0);
  ends[1].chart.dr = box1(-1.0);
  ends[1].weight = 1.0;
  const A1Result interval = compute_A1(interval_sym, ends);
  const double interval_expected = -2.0 * std::sqrt(M_PI);
  const double interval_rel =
      std::abs(interval.value - interval_expected) / std::abs(interval_expected);

  report(1, disk_rel < 0.005 && interval_rel < 0.005,
         "Dirichlet-Laplacian limit of A1",
         fmt("disk rel %.2e, interval rel %.2e", disk_rel, interval_rel));
}

// --- criterion 2: B = 0 closed forms ----------------------------------------

void criterion_2() {
  std::uniform_real_distribution<double> lam_dist(-4.0, -0.2);
  double worst_phi0 = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    CMatrix a, c;
    random_anticommuting(1 + trial % 2, a, c);
    const BoundarySplit split = split_of(a, c);
    const Complex lambda(lam_dist(rng), 0.0);

    const ResolventSlice residue = phi0(split, lambda);
    const CMatrix a_inv = a.inverse();
    const CMatrix mu = matrix_sqrt_analytic(
        a_inv * (c * c - lambda * CMatrix::Identity(a.rows(), a.cols())) * a_inv);
    const CMatrix closed = 0.5 * a_inv * mu.inverse() * a_inv;
    worst_phi0 = std::max(
        worst_phi0, max_abs(residue.phi0 - closed) / std::max(1.0, max_abs(closed)));
  }

  double worst_psi1 = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    CMatrix a, c;
    random_anticommuting(1 + trial % 2, a, c);
    const BoundarySplit split = split_of(a, c);
    const Psi1Result contour = psi1(split);
    const double closed =
        -0.5 * std::sqrt(M_PI) * matrix_exp(-(c * c)).trace().real();
    worst_psi1 = std::max(worst_psi1, std::abs(contour.value - closed));
  }

  report(2, worst_phi0 < 1e-8 && worst_psi1 < 1e-6, "B = 0 closed forms",
         fmt("phi0 residue-vs-closed %.2e (tol 1e-8), psi1 contour-vs-closed "
             "%.2e (tol 1e-6)",
             worst_phi0, worst_psi1));
}

// --- criterion 3: Phi property suite ----------------------------------------

void criterion_3() {
  std::uniform_real_distribution<double> y_dist(0.2, 1.5);
  std::uniform_real_distribution<double> lam_re(-3.0, -0.5);
  std::uniform_real_distribution<double> lam_im(-1.0, 1.0);
  double worst = 0.0;
  const char *worst_label = "";
  auto track = [&](double value, const char *label) {
    if (value > worst) {
      worst = value;
      worst_label = label;
    }
  };

  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + trial % 3;
    CMatrix a = random_hermitian(dim);
    // Keep A safely invertible.
    a += (a.determinant().real() >= 0 ? 1.0 : -1.0) * 1.5 *
         CMatrix::Identity(dim, dim);
    const CMatrix c = random_hermitian(dim);
    const BoundarySplit split = split_of(a, c);
    const Complex lambda(lam_re(rng), trial % 2 ? lam_im(rng) : 0.0);
    const double y = y_dist(rng);

    // conj(Phi(lambda, y)) = Phi(conj lambda, -y)^T; entrywise conjugation
    // transposes the matrix part for complex Hermitian coefficients.
    track(max_abs(phi(split, lambda, y).conjugate() -
                  phi(split, std::conj(lambda), -y).transpose()),
          "conjugation");

    // Evenness of Phi0 in the tangential covector (C -> -C).
    BoundarySplit flipped = split;
    flipped.C = -split.C;
    flipped.B = -split.B;
    track(max_abs(phi0(split, lambda).phi0 - phi0(flipped, lambda).phi0),
          "evenness");

    // Homogeneity Phi(lambda/t, sqrt t y, xihat/sqrt t) = sqrt t Phi.
    const double t = 2.5;
    BoundarySplit scaled = split;
    scaled.C = split.C / std::sqrt(t);
    scaled.B = split.B / std::sqrt(t);
    track(max_abs(phi(scaled, lambda / t, std::sqrt(t) * y) -
                  std::sqrt(t) * phi(split, lambda, y)),
          "homogeneity");

    // Decay beyond the residue-predicted decay length.
    const ResolventPoles poles = resolvent_poles(split, lambda);
    double slowest = std::numeric_limits<double>::infinity();
    for (const Complex &pole : poles.poles) {
      slowest = std::min(slowest, std::abs(pole.imag()));
    }
    const double y_far = 25.0 / slowest;
    track(max_abs(phi(split, lambda, y_far)), "decay(+)");
    track(max_abs(phi(split, lambda, -y_far)), "decay(-)");

    // Positivity of Phi0 for real negative lambda.
    const CMatrix p0 = phi0(split, Complex(lam_re(rng), 0.0)).phi0;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (p0 + p0.adjoint()));
    if (eig.eigenvalues()(0) <= 0.0 || hermiticity_defect(p0) > 1e-10) {
      track(1.0, "positivity");
    }
    ++checked;
  }
  report(3, worst < 1e-9 && checked == 100, "Phi property suite",
         fmt("worst residual %.2e", worst) + " [" + worst_label + "]");
}

// --- criterion 4: interior invariants ---------------------------------------

void criterion_4() {
  InteriorOptions opts;
  opts.estimate_error = false;

  // a0 = N for a Clifford symbol.
  const DensityResult a0 = compute_a0(clifford_symbol(), vec2(0.1, -0.3), opts);
  const double a0_err = std::abs(a0.value - 2.0);

  // a1 residual below 1e-8 a0 for an x-dependent symbol.
  const DiracSymbol poly_sym = rho_polynomial_symbol({1.0, 0.3, 0.35});
  const double a0_poly = compute_a0(poly_sym, box1(0.0), opts).value;
  const double a1_res = check_a1(poly_sym, box1(0.0), opts);

  // a2 on the circle: rho = 1 + 0.4 cos(x) realizes L = -d^2 + V with
  // V = rho''/rho; density matches -V pointwise and the circle integral
  // matches the discretization oracle fit.
  const double length = 2.0 * M_PI;
  std::vector<MatrixField::TrigTerm> rterms(2);
  rterms[0].harmonic = 0;
  rterms[0].is_sin = false;
  rterms[0].coeff = CMatrix::Identity(1, 1);
  rterms[1].harmonic = 1;
  rterms[1].is_sin = false;
  rterms[1].coeff = 0.4 * CMatrix::Identity(1, 1);
  std::vector<MatrixField> gamma = {
      MatrixField::constant(1, CMatrix::Identity(1, 1))};
  const DiracSymbol circle_sym = make_dirac_symbol(
      1, 1, std::move(gamma), MatrixField::trig(length, 1, rterms), {},
      box1(-length), box1(2.0 * length));

  auto potential = [&](double x) {
    return -0.4 * std::cos(x) / (1.0 + 0.4 * std::cos(x));
  };
  const int samples = 12;
  double density_worst = 0.0;
  double a2_integral = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double x = length * j / samples;
    const DensityResult a2 =
        compute_a2(circle_sym, box1(x), jets_at(circle_sym, box1(x)), opts);
    density_worst = std::max(density_worst, std::abs(a2.value + potential(x)));
    a2_integral += a2.value * (length / samples);
  }

  const int m = 512;
  const DiscretizedOperator op =
      discretize(circle_sym, Geometry::circle, length, m, OperatorKind::dbar_d);
  const RVector spectrum = dense_spectrum(op);
  const double h = length / m;
  const RVector t_grid = heat_time_grid(300.0 * h * h, 0.4, 32);
  const HeatFit fit = fit_heat_invariants(spectrum, 1, t_grid, 4, true);
  const double oracle_rel =
      std::abs(a2_integral - fit.coeffs[2]) / std::abs(fit.coeffs[2]);

  report(4,
         a0_err < 1e-8 && a1_res < 1e-8 * a0_poly && density_worst < 1e-5 &&
             oracle_rel < 0.01,
         "interior invariants a0, a1, a2",
         fmt("a0 err %.2e, a1 residual %.2e, ", a0_err, a1_res) +
             fmt("a2 density err %.2e, a2 vs oracle rel %.2e", density_worst,
                 oracle_rel));
}

// --- criterion 5: general-B cross-validation --------------------------------

void criterion_5() {
  std::vector<BoundarySplit> splits;
  splits.push_back(
      split_of(pauli_x(), pauli_y() + 0.3 * CMatrix::Identity(2, 2)));
  splits.push_back(split_of(pauli_x() + 0.3 * pauli_z(),
                            0.8 * pauli_y() + 0.35 * CMatrix::Identity(2, 2)));

  double worst = 0.0;
  for (const BoundarySplit &split : splits) {
    if (max_abs(split.B) < 1e-12) {
      report(5, false, "general-B cross-validation", "split degenerated to B=0");
      return;
    }
    const double radius = 10.0;
    const DiscretizedOperator frozen =
        discretize_frozen_halfline(split, radius, 700);
    const RVector spectrum = dense_spectrum(frozen);
    for (double t : {0.8, 1.0, 1.25}) {
      const double oracle = halfline_boundary_term(spectrum, split, radius, t);
      BoundarySplit scaled = split;
      scaled.C = std::sqrt(t) * split.C;
      scaled.B = scaled.A * scaled.C + scaled.C * scaled.A;
      const Psi1Result contour = psi1(scaled);
      worst = std::max(worst,
                       std::abs(oracle - contour.value) / std::abs(contour.value));
    }
  }
  report(5, worst < 0.01, "general-B psi1 vs half-line discretization",
         fmt("worst rel delta %.2e over 2 splits x 3 scales (tol 1e-2)", worst));
}

// --- criterion 6: index identities ------------------------------------------

void criterion_6() {
  std::vector<MatrixField::TrigTerm> gterms(2);
  gterms[0].harmonic = 0;
  gterms[0].is_sin = false;
  gterms[0].coeff = pauli_x();
  gterms[1].harmonic = 1;
  gterms[1].is_sin = true;
  gterms[1].coeff = 0.3 * pauli_x();
  std::vector<MatrixField::TrigTerm> rterms(2);
  rterms[0].harmonic = 0;
  rterms[0].is_sin = false;
  rterms[0].coeff = CMatrix::Identity(2, 2);
  rterms[1].harmonic = 1;
  rterms[1].is_sin = false;
  rterms[1].coeff = 0.1 * CMatrix::Identity(2, 2);
  const double length = 2.0 * M_PI;
  std::vector<MatrixField> gamma = {MatrixField::trig(length, 2, gterms)};
  const DiracSymbol sym = make_dirac_symbol(
      1, 2, std::move(gamma), MatrixField::trig(length, 2, rterms), {},
      box1(-length), box1(2.0 * length));

  const IndexCheck idx = index_check(sym, length, 128);
  report(6,
         idx.paired_residual < 1e-8 && idx.trace_diff_spread < 1e-6 &&
             idx.index == 0,
         "index identities on the circle",
         fmt("paired residual %.2e (tol 1e-8), trace-diff spread %.2e (tol "
             "1e-6), index %g",
             idx.paired_residual, idx.trace_diff_spread, double(idx.index)));
}

// --- criterion 7: Finsler suite ----------------------------------------------

void criterion_7() {
  const DiracSymbol sym = sheared_symbol();
  const LeadingSymbol ls = leading_symbol(sym);
  double worst_hom = 0.0, worst_deg0 = 0.0;
  for (const RVector &xi : {vec2(0.7, 1.1), vec2(-0.4, 0.9), vec2(1.2, 0.6)}) {
    for (int branch : {0, 1}) {
      const FinslerBranch b = finsler_metric(ls, vec2(0, 0), xi, branch);
      worst_hom = std::max(worst_hom, b.homogeneity_residual);
      const FinslerBranch b3 = finsler_metric(ls, vec2(0, 0), 3.0 * xi, branch);
      worst_deg0 = std::max(
          worst_deg0, (b.g_contra - b3.g_contra).cwiseAbs().maxCoeff() /
                          std::max(1.0, b.g_contra.cwiseAbs().maxCoeff()));
    }
  }

  // Flow conservation over 1000 steps on an x-dependent symbol.
  std::vector<MatrixField::PolyTerm> terms(2);
  terms[0].exponents = {0, 0};
  terms[0].coeff = pauli_y() + 0.3 * CMatrix::Identity(2, 2);
  terms[1].exponents = {2, 0};
  terms[1].coeff = 0.05 * CMatrix::Identity(2, 2);
  std::vector<MatrixField> gamma = {
      MatrixField::constant(2, pauli_x()),
      MatrixField::polynomial(2, 2, std::move(terms))};
  RVector lo(2), hi(2);
  lo << -4.0, -4.0;
  hi << 4.0, 4.0;
  const DiracSymbol flowing = make_dirac_symbol(
      2, 2, std::move(gamma), MatrixField::constant(2, CMatrix::Identity(2, 2)),
      {}, std::move(lo), std::move(hi));
  const LeadingSymbol fls = leading_symbol(flowing);
  FlowState state{vec2(0.0, 0.0), vec2(0.6, 1.0), 1, 0.0};
  const double h0 = eigen_branches(fls, state.x, state.xi).values(1);
  for (int s = 0; s < 1000; ++s) {
    state = hamiltonian_step(fls, state, 1e-3);
  }
  const double h1 = eigen_branches(fls, state.x, state.xi).values(1);
  const double drift = std::abs(h1 - h0) / h0;

  report(7, worst_hom < 1e-6 && worst_deg0 < 1e-5 && drift < 1e-6,
         "Finsler homogeneity and flow conservation",
         fmt("identity %.2e, degree-0 %.2e, flow drift %.2e", worst_hom,
             worst_deg0, drift));
}

// --- criterion 8: oracle convergence ----------------------------------------

void criterion_8() {
  std::vector<MatrixField> gamma = {
      MatrixField::constant(1, CMatrix::Identity(1, 1))};
  const DiracSymbol sym = make_dirac_symbol(
      1, 1, std::move(gamma), MatrixField::constant(1, CMatrix::Identity(1, 1)),
      {}, box1(-1.0), box1(4.0));

  std::vector<double> errors;
  for (int m : {64, 128, 256}) {
    const DiscretizedOperator op =
        discretize(sym, Geometry::interval, M_PI, m, OperatorKind::dbar_d);
    errors.push_back(std::abs(dense_spectrum(op)(0) - 1.0));
  }
  const double p1 = std::log(errors[0] / errors[1]) / std::log(2.0);
  const double p2 = std::log(errors[1] / errors[2]) / std::log(2.0);

  const int m = 256;
  const DiscretizedOperator op =
      discretize(sym, Geometry::interval, M_PI, m, OperatorKind::dbar_d);
  const RVector spectrum = dense_spectrum(op);
  const double h = M_PI / m;
  const RVector t_grid = heat_time_grid(300.0 * h * h, 0.1 * M_PI * M_PI, 24);
  const HeatFit fit = fit_heat_invariants(spectrum, 1, t_grid, 3);
  const double a0_rel = std::abs(fit.coeffs[0] - M_PI) / M_PI;
  const double a1_rel =
      std::abs(fit.coeffs[1] + std::sqrt(M_PI)) / std::sqrt(M_PI);

  report(8,
         a0_rel < 0.01 && a1_rel < 0.02 && std::abs(p1 - 2.0) < 0.2 &&
             std::abs(p2 - 2.0) < 0.2,
         "oracle convergence",
         fmt("A0 rel %.2e (tol 1e-2), A1 rel %.2e (tol 2e-2), ", a0_rel,
             a1_rel) +
             fmt("order %.3f / %.3f (2 +- 0.2)", p1, p2));
}

} // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (failures != 0) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
