// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_QUADRATURE_HPP
#define HEATKERN_QUADRATURE_HPP

#include <vector>

#include "heatkern/types.hpp"

namespace heatkern {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Hermite rule for the weight e^{-x^2} on the real line.
QuadratureRule gauss_hermite(int order);

// Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int order, double a = -1.0, double b = 1.0);

// Tensor Gauss-Hermite grid for integrals  int_{R^n} f(xi) dxi / pi^{n/2}
// with f decaying like exp(-xi^T G0 xi). The grid is whitened by the SPD
// proxy metric G0 (contravariant components): nodes are mapped through the
// inverse Cholesky transpose so the decay is isotropic in the integration
// variable, and the Gaussian weight is stripped from the quadrature weights
// so the integrand is evaluated as-is.
struct XiQuadrature {
  int order = 16;                      // nodes per axis
  std::vector<RVector> nodes;          // xi covectors, length order^n
  std::vector<double> weights;         // includes 1/pi^{n/2} and the Jacobian
};

XiQuadrature make_xi_quadrature(const RMatrix &proxy_metric, int order);

// Quasi-uniform unit covector directions: +-1 for n=1, uniform angles for
// n=2, Fibonacci lattice for n=3.
std::vector<RVector> sphere_directions(int dim, int count);

} // namespace heatkern

#endif
