// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_ORACLE_HPP
#define HEATKERN_ORACLE_HPP

#include <string>
#include <utility>
#include <vector>

#include "heatkern/symbol.hpp"
#include "heatkern/types.hpp"

namespace heatkern {

enum class Geometry { circle, interval, halfline };

enum class OperatorKind { laplacian, dirac, dirac_adjoint, dbar_d, d_dbar };

// Dense discretization of one of the operators Delta, D, Dbar, DbarD, DDbar
// on a one-dimensional geometry. First-order operators live on a staggered
// pair of grids (nodes -> cell midpoints), so Dbar is exactly the matrix
// adjoint of D and the product discretizations D†D, DD† inherit the spectral
// pairing identities at the matrix level.
struct DiscretizedOperator {
  Geometry geometry = Geometry::circle;
  OperatorKind kind = OperatorKind::dbar_d;
  int m = 0;          // cells along the geometry
  double length = 0.0;
  int fiber = 0;
  CMatrix matrix;
};

// Requires a 1-d symbol; m >= 16. Dirichlet conditions are imposed by row
// elimination on interval and halfline geometries (both ends).
DiscretizedOperator discretize(const DiracSymbol &sym, Geometry geometry,
                               double length, int m, OperatorKind kind);

// Frozen-coefficient boundary operator -A^2 d_r^2 - i B d_r + C^2 on [0, R]
// with Dirichlet ends, by second-order central differences.
DiscretizedOperator discretize_frozen_halfline(const BoundarySplit &split,
                                               double radius, int m);

// Default truncation radius 20 / sqrt(lambda_min(C^2 + I)).
double halfline_radius(const BoundarySplit &split);

// Eigenvalues of a Hermitian discretization (ascending).
RVector dense_spectrum(const DiscretizedOperator &op, double herm_tol = 1e-8);

double heat_trace(const RVector &spectrum, double t);

// Whole-line heat density of the frozen symbol,
// int domega/2pi tr exp(-t (A omega + C)^2), by adaptive-free quadrature.
double frozen_interior_density(const BoundarySplit &split, double t,
                               int nodes = 400);

// sqrt(pi) (Tr e^{-tT} - R I(t)): the boundary part of the truncated
// half-line trace, equal to Psi1(sqrt(t) xihat) up to exponentially small
// truncation terms. The independent cross-check of the contour integral.
double halfline_boundary_term(const RVector &spectrum, const BoundarySplit &split,
                              double radius, double t);

// Log-spaced sample grid.
RVector heat_time_grid(double t_lo, double t_hi, int count);

struct HeatFit {
  std::vector<double> coeffs;      // fitted A_k, k = 0..k_max
  std::vector<double> uncertainty; // change under halving the t-window
  double residual = 0.0;           // weighted rms misfit
  double condition = 0.0;
  std::vector<std::string> warnings;
};

// Weighted least squares of the trace samples against
//   (4 pi t)^{-n/2} sum_k t^{k/2} A_k.
// Closed geometries have no boundary densities, so even_only constrains the
// odd (half-power) coefficients to zero instead of letting them absorb
// discretization noise.
HeatFit fit_heat_invariants(const RVector &spectrum, int manifold_dim,
                            const RVector &t_grid, int k_max,
                            bool even_only = false);

struct IndexCheck {
  double paired_residual = 0.0; // max relative mismatch of nonzero spectra
  int index = 0;                // dim ker(DbarD) - dim ker(DDbar)
  std::vector<std::pair<double, double>> trace_diff_samples; // (t, diff)
  double trace_diff_spread = 0.0;
  std::vector<std::string> flags;
};

// Spectral pairing of DbarD and DDbar on a circle and the heat-trace index.
IndexCheck index_check(const DiracSymbol &sym, double length, int m);

} // namespace heatkern

#endif
