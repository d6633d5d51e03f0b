// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_SYMBOL_HPP
#define HEATKERN_SYMBOL_HPP

#include <vector>

#include "heatkern/fields.hpp"
#include "heatkern/types.hpp"

namespace heatkern {

// Defining data of a non-Laplace type operator over a single chart:
// self-adjoint Dirac matrices Gamma^mu, a self-adjoint invertible measure
// density rho, and an anti-self-adjoint connection B_mu.
struct DiracSymbol {
  int n = 0; // manifold dimension
  int N = 0; // fiber dimension
  std::vector<MatrixField> gamma; // n fields
  MatrixField rho;
  std::vector<MatrixField> connection; // n fields
  RVector box_lo, box_hi;

  bool in_domain(const RVector &x) const;
};

// Validates the algebraic structure at sampled chart points (self-adjointness
// of Gamma and rho, non-degeneracy of rho, anti-self-adjointness of B) and
// returns the assembled symbol. Throws ValidationError on violation.
DiracSymbol make_dirac_symbol(int n, int N, std::vector<MatrixField> gamma,
                              MatrixField rho, std::vector<MatrixField> connection,
                              RVector box_lo, RVector box_hi);

// a^{mu nu}(x) = (Gamma^mu Gamma^nu + Gamma^nu Gamma^mu) / 2.
std::vector<std::vector<CMatrix>> build_metric(const DiracSymbol &sym,
                                               const RVector &x);

// Leading symbol H(x, xi) = [Gamma(xi)]^2.
CMatrix build_H(const DiracSymbol &sym, const RVector &x, const RVector &xi);

struct EllipticitySampleSpec {
  int grid_per_axis = 8;
  int directions = 512;
  double threshold = 1e-8;
  bool refine = true;
};

struct EllipticityVerdict {
  bool elliptic = false;
  double min_eigenvalue = 0.0;
  RVector witness_x;
  RVector witness_xi;
};

// Samples lambda_min(H(x, xi)) over the domain box times the unit covector
// sphere (homogeneity makes the sphere sufficient), with one refinement pass
// around the minimizer. Heuristic certificate, not a proof.
EllipticityVerdict ellipticity_check(const DiracSymbol &sym,
                                     const EllipticitySampleSpec &spec = {});

// Boundary chart data at one boundary point: the conormal dr and the
// tangential coframe dxhat^j, all expressed in the ambient coordinate basis.
struct BoundaryChart {
  RVector point;              // ambient coordinates of the boundary point
  RVector dr;                 // n components
  std::vector<RVector> dxhat; // n-1 covectors, n components each
};

// Frozen boundary matrices A = Gamma(dr), C = Gamma(dxhat^j) xihat_j,
// B = AC + CA at a boundary point and tangential covector.
struct BoundarySplit {
  CMatrix A, B, C;
  RVector point;
  RVector xi_hat;
};

// Throws EllipticityError if A = Gamma(dr) is singular (degenerate normal
// direction).
BoundarySplit boundary_split(const DiracSymbol &sym, const BoundaryChart &chart,
                             const RVector &xi_hat);

// Point values and first/second coordinate derivatives of one field.
struct FieldJet {
  CMatrix value;
  std::vector<CMatrix> first;               // index mu
  std::vector<std::vector<CMatrix>> second; // indices mu, nu (symmetric)
};

struct JetData {
  RVector x;
  std::vector<FieldJet> gamma;
  FieldJet rho;
  std::vector<FieldJet> conn;
};

// Jets of all coefficient fields at x. Analytic derivative rules are used
// when present (cross-checked against central differences of step h);
// otherwise the central differences themselves are returned. Requires x to
// be interior to the domain box by a margin of 2h.
JetData jets_at(const DiracSymbol &sym, const RVector &x, double h = 0.0);

} // namespace heatkern

#endif
