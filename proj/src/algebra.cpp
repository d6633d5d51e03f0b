// SPDX-License-Identifier: Apache-2.0

#include "heatkern/algebra.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace heatkern {

HermitianEig hermitian_eig(const CMatrix &m, double tol) {
  require_finite(m, "hermitian_eig");
  require_hermitian(m, tol, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (m + m.adjoint()));
  if (solver.info() != Eigen::Success) {
    throw Error("hermitian_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

// Scaling-and-squaring with the degree-13 diagonal rational approximant.
CMatrix exp_scaling_squaring(const CMatrix &m) {
  static const double pade13[] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const double theta13 = 5.371920351148152;

  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff(); // inf-norm
  int squarings = 0;
  CMatrix a = m;
  if (norm > theta13) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    a /= std::pow(2.0, squarings);
  }

  const Eigen::Index dim = m.rows();
  const CMatrix ident = CMatrix::Identity(dim, dim);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;

  CMatrix u = a * (a6 * (pade13[13] * a6 + pade13[11] * a4 + pade13[9] * a2) +
                   pade13[7] * a6 + pade13[5] * a4 + pade13[3] * a2 +
                   pade13[1] * ident);
  CMatrix v = a6 * (pade13[12] * a6 + pade13[10] * a4 + pade13[8] * a2) +
              pade13[6] * a6 + pade13[4] * a4 + pade13[2] * a2 +
              pade13[0] * ident;

  CMatrix f = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) {
    f = f * f;
  }
  return f;
}

} // namespace

CMatrix matrix_exp(const CMatrix &m) {
  require_finite(m, "matrix_exp");
  const double scale = std::max(1.0, max_abs(m));
  if (hermiticity_defect(m) <= 1e-12 * scale) {
    HermitianEig eig = hermitian_eig(m, 1e-10);
    CVector expvals = eig.eigenvalues.array().exp().matrix().cast<Complex>();
    return eig.eigenvectors * expvals.asDiagonal() * eig.eigenvectors.adjoint();
  }
  return exp_scaling_squaring(m);
}

CMatrix matrix_sqrt_analytic(const CMatrix &m, SqrtBranch, double cut_tol) {
  require_finite(m, "matrix_sqrt_analytic");
  const Eigen::Index dim = m.rows();

  Eigen::ComplexSchur<CMatrix> schur(m);
  if (schur.info() != Eigen::Success) {
    throw Error("matrix_sqrt_analytic: Schur decomposition failed");
  }
  const CMatrix &t = schur.matrixT();
  const CMatrix &q = schur.matrixU();

  double eig_scale = 1.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    eig_scale = std::max(eig_scale, std::abs(t(i, i)));
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex z = t(i, i);
    // Distance from the closed negative real axis (the branch cut).
    const double dist = z.real() <= 0.0 ? std::abs(z.imag()) : std::abs(z);
    if (dist < cut_tol * eig_scale) {
      throw BranchCutError(
          "matrix_sqrt_analytic: eigenvalue within tolerance of the branch "
          "cut (closed negative real axis)");
    }
  }

  // Square root of the upper-triangular factor by the standard recurrence.
  CMatrix s = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    s(i, i) = std::sqrt(t(i, i)); // principal branch, Re >= 0
  }
  for (Eigen::Index j = 1; j < dim; ++j) {
    for (Eigen::Index i = j - 1; i >= 0; --i) {
      Complex sum = t(i, j);
      for (Eigen::Index k = i + 1; k < j; ++k) {
        sum -= s(i, k) * s(k, j);
      }
      s(i, j) = sum / (s(i, i) + s(j, j));
    }
  }
  return q * s * q.adjoint();
}

PencilSpectrum pencil_roots(const CMatrix &a2, const CMatrix &b1, const CMatrix &c0,
                            Complex lambda, double defect_tol) {
  const Eigen::Index dim = a2.rows();
  require_finite(a2, "pencil_roots: A2");
  require_finite(b1, "pencil_roots: B1");
  require_finite(c0, "pencil_roots: C0");

  Eigen::PartialPivLU<CMatrix> a2_lu(a2);
  CMatrix a2_inv = a2_lu.inverse();
  if (!is_finite(a2_inv) || max_abs(a2 * a2_inv - CMatrix::Identity(dim, dim)) > 1e-8) {
    throw ValidationError("pencil_roots: A2 is singular or badly conditioned");
  }

  // Monicize and linearize: M(w) = I w^2 + M1 w + M0.
  CMatrix shifted = c0 - lambda * CMatrix::Identity(dim, dim);
  CMatrix m1 = a2_inv * b1;
  CMatrix m0 = a2_inv * shifted;

  CMatrix companion = CMatrix::Zero(2 * dim, 2 * dim);
  companion.block(0, dim, dim, dim) = CMatrix::Identity(dim, dim);
  companion.block(dim, 0, dim, dim) = -m0;
  companion.block(dim, dim, dim, dim) = -m1;

  Eigen::ComplexEigenSolver<CMatrix> solver(companion);
  if (solver.info() != Eigen::Success) {
    throw Error("pencil_roots: companion eigensolver did not converge");
  }
  const CMatrix &vecs = solver.eigenvectors();

  // A defective (non-semisimple) cluster shows up as a rank-deficient
  // eigenvector matrix.
  Eigen::JacobiSVD<CMatrix> svd(vecs);
  const double cond =
      svd.singularValues()(0) / svd.singularValues()(2 * dim - 1);
  if (!std::isfinite(cond) || 1.0 / cond < defect_tol) {
    throw DegeneracyError(
        "pencil_roots: defective root cluster detected (eigenvector matrix "
        "numerically singular); perturb lambda by ~1e-6*(1+|lambda|) and retry");
  }

  CMatrix vecs_inv = vecs.partialPivLu().inverse();

  PencilSpectrum spectrum;
  spectrum.roots.resize(2 * dim);
  spectrum.residues.resize(2 * dim);
  for (Eigen::Index j = 0; j < 2 * dim; ++j) {
    spectrum.roots[j] = solver.eigenvalues()(j);
    // Residue of M^{-1} at root j is (top block of v_j) (trailing block of
    // row j of V^{-1}); postmultiply by A2^{-1} to undo the monicization.
    CMatrix top = vecs.block(0, j, dim, 1);
    CMatrix tail = vecs_inv.block(j, dim, 1, dim);
    spectrum.residues[j] = top * tail * a2_inv;
  }
  return spectrum;
}

CMatrix pencil_resolvent(const CMatrix &a2, const CMatrix &b1, const CMatrix &c0,
                         Complex lambda, Complex omega) {
  const Eigen::Index dim = a2.rows();
  CMatrix p = a2 * (omega * omega) + b1 * omega + c0 -
              lambda * CMatrix::Identity(dim, dim);
  Eigen::FullPivLU<CMatrix> lu(p);
  if (!lu.isInvertible() ||
      lu.rcond() < 1e-12) {
    throw DegeneracyError("pencil_resolvent: pencil within 1e-12 of singular at "
                          "the requested (lambda, omega)");
  }
  return lu.inverse();
}

} // namespace heatkern
