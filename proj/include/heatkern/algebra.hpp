// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_ALGEBRA_HPP
#define HEATKERN_ALGEBRA_HPP

#include <vector>

#include "heatkern/types.hpp"

namespace heatkern {

struct HermitianEig {
  RVector eigenvalues; // ascending
  CMatrix eigenvectors; // unitary, columns match eigenvalues
};

// Hermitian eigendecomposition M = U diag(lambda) U^H.
// Throws ValidationError if M is not Hermitian within tol*max|M|.
HermitianEig hermitian_eig(const CMatrix &m, double tol = 1e-10);

// Matrix exponential. Hermitian inputs go through the eigendecomposition
// (exact to eigensolver accuracy); everything else through scaling-and-
// squaring with a degree-13 rational approximant.
CMatrix matrix_exp(const CMatrix &m);

enum class SqrtBranch {
  // Root whose eigenvalues have positive real part, continuous in the
  // argument from the positive-definite regime. Branch cut on the closed
  // negative real axis.
  positive_real
};

// Analytic matrix square root. Throws BranchCutError if an eigenvalue lies
// within cut_tol (relative) of the branch cut.
CMatrix matrix_sqrt_analytic(const CMatrix &m,
                             SqrtBranch branch = SqrtBranch::positive_real,
                             double cut_tol = 1e-10);

// Roots and matrix residues of the quadratic pencil
//   P(omega) = A2 omega^2 + B1 omega + (C0 - lambda I).
// The resolvent P(omega)^{-1} is strictly proper, so it equals
// sum_j residue_j / (omega - omega_j) over the 2N roots.
struct PencilSpectrum {
  std::vector<Complex> roots;   // 2N, counted with multiplicity
  std::vector<CMatrix> residues; // matrix residue of P^{-1} at each root
};

// Companion linearization of the quadratic pencil (first companion form
// premultiplied by A2^{-1}). Requires A2 invertible. Simple or semisimple
// roots only; a defective cluster raises DegeneracyError suggesting a
// perturbation of lambda.
PencilSpectrum pencil_roots(const CMatrix &a2, const CMatrix &b1, const CMatrix &c0,
                            Complex lambda, double defect_tol = 1e-8);

// P(omega)^{-1} evaluated directly (dense solve); near-singular pencils
// raise DegeneracyError.
CMatrix pencil_resolvent(const CMatrix &a2, const CMatrix &b1, const CMatrix &c0,
                         Complex lambda, Complex omega);

} // namespace heatkern

#endif
