// SPDX-License-Identifier: Apache-2.0

#include "heatkern/volterra.hpp"

#include <cmath>

#include "heatkern/algebra.hpp"
#include "heatkern/quadrature.hpp"

namespace heatkern {

namespace {

CVector exp_diag(const RVector &eigenvalues, double factor) {
  CVector out(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    out(i) = std::exp(-factor * eigenvalues(i));
  }
  return out;
}

CMatrix volterra_hermitian(const CMatrix &h, const std::vector<CMatrix> &factors,
                           int order) {
  const HermitianEig eig = hermitian_eig(h);
  const CMatrix &u = eig.eigenvectors;
  const RVector &lam = eig.eigenvalues;
  const Eigen::Index dim = h.rows();

  const QuadratureRule rule = gauss_legendre(order, 0.0, 1.0);

  if (factors.size() == 1) {
    const CMatrix f1 = u.adjoint() * factors[0] * u;
    CMatrix acc = CMatrix::Zero(dim, dim);
    for (int m = 0; m < order; ++m) {
      const double tau = rule.nodes[m];
      const CVector left = exp_diag(lam, 1.0 - tau);
      const CVector right = exp_diag(lam, tau);
      acc += rule.weights[m] *
             (left.asDiagonal() * f1 * right.asDiagonal()).eval();
    }
    return u * acc * u.adjoint();
  }

  // k = 2 over the simplex 0 <= tau1 <= tau2 <= 1 via tau1 = tau2 * s.
  const CMatrix f1 = u.adjoint() * factors[0] * u;
  const CMatrix f2 = u.adjoint() * factors[1] * u;
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (int m = 0; m < order; ++m) {
    const double tau2 = rule.nodes[m];
    const CVector left = exp_diag(lam, 1.0 - tau2);
    for (int l = 0; l < order; ++l) {
      const double tau1 = tau2 * rule.nodes[l];
      const CVector mid = exp_diag(lam, tau2 - tau1);
      const CVector right = exp_diag(lam, tau1);
      const double w = rule.weights[m] * rule.weights[l] * tau2;
      acc += w * (left.asDiagonal() * f2 * mid.asDiagonal() * f1 *
                  right.asDiagonal())
                     .eval();
    }
  }
  return u * acc * u.adjoint();
}

CMatrix volterra_general(const CMatrix &h, const std::vector<CMatrix> &factors,
                         int order) {
  const Eigen::Index dim = h.rows();
  const QuadratureRule rule = gauss_legendre(order, 0.0, 1.0);

  if (factors.size() == 1) {
    CMatrix acc = CMatrix::Zero(dim, dim);
    for (int m = 0; m < order; ++m) {
      const double tau = rule.nodes[m];
      acc += rule.weights[m] * matrix_exp(-(1.0 - tau) * h) * factors[0] *
             matrix_exp(-tau * h);
    }
    return acc;
  }

  CMatrix acc = CMatrix::Zero(dim, dim);
  for (int m = 0; m < order; ++m) {
    const double tau2 = rule.nodes[m];
    const CMatrix left = matrix_exp(-(1.0 - tau2) * h);
    for (int l = 0; l < order; ++l) {
      const double tau1 = tau2 * rule.nodes[l];
      const double w = rule.weights[m] * rule.weights[l] * tau2;
      acc += w * left * factors[1] * matrix_exp(-(tau2 - tau1) * h) *
             factors[0] * matrix_exp(-tau1 * h);
    }
  }
  return acc;
}

} // namespace

CMatrix volterra_term(const CMatrix &h, const std::vector<CMatrix> &factors,
                      const VolterraSpec &spec) {
  if (factors.empty() || factors.size() > 2) {
    throw ConfigError("volterra_term: only factor counts 1 and 2 are supported");
  }
  require_finite(h, "volterra_term");
  for (const CMatrix &f : factors) {
    require_finite(f, "volterra_term factor");
  }
  const double scale = std::max(1.0, max_abs(h));
  if (hermiticity_defect(h) <= 1e-12 * scale) {
    return volterra_hermitian(h, factors, spec.order);
  }
  return volterra_general(h, factors, spec.order);
}

} // namespace heatkern
