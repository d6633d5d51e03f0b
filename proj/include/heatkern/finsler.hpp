// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_FINSLER_HPP
#define HEATKERN_FINSLER_HPP

#include <functional>
#include <string>
#include <vector>

#include "heatkern/symbol.hpp"
#include "heatkern/types.hpp"

namespace heatkern {

// Positive-definite matrix-valued leading symbol H(x, xi), the only input
// the induced Finsler data depends on.
struct LeadingSymbol {
  int n = 0;
  int N = 0;
  std::function<CMatrix(const RVector &, const RVector &)> H;
};

LeadingSymbol leading_symbol(const DiracSymbol &sym);

struct EigenBranches {
  RVector values;               // ascending eigenvalues of H(x, xi)
  std::vector<bool> degenerate; // gap below 1e-8 * max to a neighbor
  CMatrix eigenvectors;
};

EigenBranches eigen_branches(const LeadingSymbol &sym, const RVector &x,
                             const RVector &xi);

// One eigenvalue branch h_(a) with its covector gradient and the induced
// contravariant Finsler metric g^{mu nu} = (1/2) d^2 h / dxi_mu dxi_nu.
struct FinslerBranch {
  int branch = 0; // 0-based index into the ascending branches
  double h = 0.0;
  RVector grad_xi;
  RMatrix g_contra;
  bool convex = true;
  double homogeneity_residual = 0.0; // |g xi.xi - h| / h
  std::vector<std::string> warnings;
};

// Hessian by central differences in xi (step 1e-4 |xi|), with eigenvalue
// branches tracked across perturbations by eigenvector overlap. Degenerate
// branches are refused unless the branch function is exactly quadratic
// (detected by step-refinement agreement of the Hessian).
FinslerBranch finsler_metric(const LeadingSymbol &sym, const RVector &x,
                             const RVector &xi, int branch);

// g_{mu nu}: inverse of the contravariant metric. Throws IllConditionedError
// above condition number 1e12.
RMatrix covariant_metric(const FinslerBranch &branch);

struct FlowState {
  RVector x;
  RVector xi;
  int branch = 0;
  double t = 0.0;
};

// One classical 4-stage explicit step of the bicharacteristic system
//   dx/dt = (1/2) dh/dxi,  dxi/dt = -(1/2) dh/dx.
// Throws DegeneracyError if the tracked branch loses its spectral gap.
FlowState hamiltonian_step(const LeadingSymbol &sym, const FlowState &state,
                           double dt);

} // namespace heatkern

#endif
