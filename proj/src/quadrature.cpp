// SPDX-License-Identifier: Apache-2.0

#include "heatkern/quadrature.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace heatkern {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
// mu0 times the squared first eigenvector components.
QuadratureRule golub_welsch(const RVector &offdiag, double mu0) {
  const int order = static_cast<int>(offdiag.size()) + 1;
  RMatrix jacobi = RMatrix::Zero(order, order);
  for (int k = 0; k + 1 < order; ++k) {
    jacobi(k, k + 1) = offdiag(k);
    jacobi(k + 1, k) = offdiag(k);
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int k = 0; k < order; ++k) {
    rule.nodes[k] = solver.eigenvalues()(k);
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

} // namespace

QuadratureRule gauss_hermite(int order) {
  if (order < 1) {
    throw ConfigError("gauss_hermite: order must be >= 1");
  }
  RVector offdiag(order - 1);
  for (int k = 1; k < order; ++k) {
    offdiag(k - 1) = std::sqrt(0.5 * k);
  }
  return golub_welsch(offdiag, std::sqrt(M_PI));
}

QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) {
    throw ConfigError("gauss_legendre: order must be >= 1");
  }
  RVector offdiag(order - 1);
  for (int k = 1; k < order; ++k) {
    offdiag(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  }
  QuadratureRule rule = golub_welsch(offdiag, 2.0);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int k = 0; k < order; ++k) {
    rule.nodes[k] = mid + half * rule.nodes[k];
    rule.weights[k] *= half;
  }
  return rule;
}

XiQuadrature make_xi_quadrature(const RMatrix &proxy_metric, int order) {
  const int dim = static_cast<int>(proxy_metric.rows());
  if (dim < 1) {
    throw ConfigError("make_xi_quadrature: empty proxy metric");
  }
  Eigen::LLT<RMatrix> llt(proxy_metric);
  if (llt.info() != Eigen::Success) {
    throw ValidationError("make_xi_quadrature: proxy metric is not positive "
                          "definite");
  }
  // xi = L^{-T} eta turns xi^T G0 xi into |eta|^2.
  RMatrix l = llt.matrixL();
  RMatrix linv_t = l.transpose().inverse();
  const double jacobian = 1.0 / l.diagonal().prod();

  QuadratureRule rule = gauss_hermite(order);
  const double prefactor = jacobian * std::pow(M_PI, -0.5 * dim);

  XiQuadrature quad;
  quad.order = order;
  const long total = static_cast<long>(std::pow(order, dim));
  quad.nodes.reserve(total);
  quad.weights.reserve(total);

  std::vector<int> index(dim, 0);
  for (long flat = 0; flat < total; ++flat) {
    RVector eta(dim);
    double weight = prefactor;
    long rem = flat;
    for (int axis = 0; axis < dim; ++axis) {
      const int i = static_cast<int>(rem % order);
      rem /= order;
      index[axis] = i;
      eta(axis) = rule.nodes[i];
      // Strip the Gaussian weight so integrands carry their own decay.
      weight *= rule.weights[i] * std::exp(rule.nodes[i] * rule.nodes[i]);
    }
    quad.nodes.push_back(linv_t * eta);
    quad.weights.push_back(weight);
  }
  return quad;
}

std::vector<RVector> sphere_directions(int dim, int count) {
  std::vector<RVector> dirs;
  if (dim == 1) {
    RVector plus(1), minus(1);
    plus << 1.0;
    minus << -1.0;
    dirs = {plus, minus};
  } else if (dim == 2) {
    dirs.reserve(count);
    for (int k = 0; k < count; ++k) {
      const double angle = 2.0 * M_PI * k / count;
      RVector d(2);
      d << std::cos(angle), std::sin(angle);
      dirs.push_back(d);
    }
  } else if (dim == 3) {
    // Fibonacci lattice.
    dirs.reserve(count);
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double radius = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double angle = 2.0 * M_PI * k / golden;
      RVector d(3);
      d << radius * std::cos(angle), radius * std::sin(angle), z;
      dirs.push_back(d);
    }
  } else {
    throw ConfigError("sphere_directions: only dimensions 1..3 supported");
  }
  return dirs;
}

} // namespace heatkern
