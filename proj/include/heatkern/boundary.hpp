// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_BOUNDARY_HPP
#define HEATKERN_BOUNDARY_HPP

#include <functional>
#include <string>
#include <vector>

#include "heatkern/symbol.hpp"
#include "heatkern/types.hpp"

namespace heatkern {

// R_lambda(omega) = [(A omega + C)^2 - lambda I]^{-1}, evaluated directly.
CMatrix resolvent_symbol(const BoundarySplit &split, Complex lambda,
                         Complex omega);

// Poles of R_lambda in omega with clustered matrix residues (semisimple
// repeated roots are merged into one pole with the summed residue).
struct ResolventPoles {
  std::vector<Complex> poles;
  std::vector<CMatrix> residues;
  double reconstruction_defect = 0.0; // |sum residues| (exact decay: 0)
};

ResolventPoles resolvent_poles(const BoundarySplit &split, Complex lambda);

// Phi(lambda, y) = int domega/2pi e^{i omega y} R_lambda(omega), evaluated
// by residue closure in the half-plane selected by the sign of y.
CMatrix phi(const BoundarySplit &split, Complex lambda, double y);

enum class Phi0Method { residue, quadrature, closed_form };

struct ResolventSlice {
  Complex lambda;
  RVector xi_hat;
  CMatrix phi0;
  CMatrix dphi0; // d/dlambda of phi0
  Phi0Method method = Phi0Method::residue;
  double residual = 0.0; // method-dependent diagnostic
};

// Phi0 and its lambda-derivative. The residue route is the default; the
// real-line quadrature route cross-validates it; the closed form requires
// B = 0 and goes through the analytic matrix square root.
ResolventSlice phi0(const BoundarySplit &split, Complex lambda,
                    Phi0Method method = Phi0Method::residue);

// Unique decaying solution of (-A^2 d_r^2 - iB d_r + C^2 - lambda) phi = 0
// with phi(0) = f: phi(r) = Phi(lambda, r) Phi0^{-1} f.
struct HalflineSolution {
  CMatrix phi0;
  std::function<CVector(double)> eval;
};

HalflineSolution solve_halfline_ode(const BoundarySplit &split, Complex lambda,
                                    const CVector &f);

// Deformed inverse-Laplace contour lambda(u) = vertex + u^2 + 2i slope u,
// u in [-halfwidth, halfwidth], traversed with increasing imaginary part
// (the deformation of the upward vertical line at Re lambda = w around the
// spectral cut on the positive real axis).
struct ContourSpec {
  int nodes = 64;
  double vertex = -1.0;
  double slope = 1.0;
  double halfwidth = 7.0;
};

struct Psi1Result {
  double value = 0.0;
  double coarse_value = 0.0; // same trapezoid on every other node
  double imag_defect = 0.0;  // |Im| of the contour sum, a consistency check
};

// Psi1 = -sqrt(pi) int dlambda/(2 pi i) e^{-lambda} tr Phi0^{-1} d Phi0.
Psi1Result psi1(const BoundarySplit &split, const ContourSpec &contour = {});

struct BoundaryMeshPoint {
  BoundaryChart chart;
  double weight = 0.0;
};

struct A1Options {
  int xi_order = 16;
  ContourSpec contour;
  int threads = 0;
};

struct A1Result {
  double value = 0.0;
  double error = 0.0;
  std::vector<double> per_point; // boundary density per mesh point
  std::vector<std::string> warnings;
};

// A1 = int_{boundary} dxhat int dxihat / pi^{(n-1)/2} Psi1(xihat), with the
// tangential integral done by whitened Gauss-Hermite and the evenness of
// Psi1 halving the node count.
A1Result compute_A1(const DiracSymbol &sym,
                    const std::vector<BoundaryMeshPoint> &mesh,
                    const A1Options &opts = {});

} // namespace heatkern

#endif
