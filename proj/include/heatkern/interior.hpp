// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_INTERIOR_HPP
#define HEATKERN_INTERIOR_HPP

#include <functional>
#include <string>
#include <vector>

#include "heatkern/jets.hpp"
#include "heatkern/quadrature.hpp"
#include "heatkern/symbol.hpp"
#include "heatkern/volterra.hpp"

namespace heatkern {

struct InteriorOptions {
  int xi_order = 16;       // Gauss-Hermite nodes per covector axis
  int simplex_order = 24;  // Gauss nodes per tau axis
  double tolerance = 1e-6; // self-convergence target for warnings
  bool estimate_error = true;
  int threads = 0; // 0 = serial
};

struct DensityResult {
  double value = 0.0;
  double error = 0.0; // order-refinement delta (0 when not estimated)
  std::vector<std::string> warnings;
};

// Scalar proxy metric (1/N) Re tr a^{mu nu}(x); whitens the xi-quadrature.
RMatrix proxy_metric(const DiracSymbol &sym, const RVector &x);

// Quadrature of tr exp(-H(xi)) against the whitened Gauss-Hermite grid;
// exposed separately so synthetic leading symbols can be integrated too.
double a0_integral(const std::function<CMatrix(const RVector &)> &h_of_xi,
                   const XiQuadrature &quad);

// a0 = int dxi/pi^{n/2} tr e^{-H(x, xi)}.
DensityResult compute_a0(const DiracSymbol &sym, const RVector &x,
                         const InteriorOptions &opts = {});

// Magnitude of the first-order (odd) coefficient after xi integration;
// vanishes up to rounding because the quadrature grid is symmetric.
double check_a1(const DiracSymbol &sym, const RVector &x,
                const InteriorOptions &opts = {});

// a2 at x: xi-quadrature of
//   tr[ intint e^{-(1-t2)H} K e^{-(t2-t1)H} K e^{-t1 H}
//       - int e^{-(1-t)H} DbarD e^{-t H} ]
// with the operators expanded through the coefficient jets and the
// x-derivatives of exponential factors evaluated by the integral rule.
DensityResult compute_a2(const DiracSymbol &sym, const RVector &x,
                         const JetData &jets, const InteriorOptions &opts = {});

} // namespace heatkern

#endif
