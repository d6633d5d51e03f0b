// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "heatkern/quadrature.hpp"

using namespace heatkern;

TEST_CASE("gauss_hermite: moments of exp(-x^2)") {
  const QuadratureRule rule = gauss_hermite(16);
  // int x^{2k} e^{-x^2} = Gamma(k + 1/2).
  auto moment = [&](int p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc += rule.weights[i] * std::pow(rule.nodes[i], p);
    }
    return acc;
  };
  CHECK(moment(0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(moment(2) == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(moment(4) == doctest::Approx(0.75 * std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(std::abs(moment(1)) < 1e-14);
  CHECK(std::abs(moment(7)) < 1e-11); // odd moments cancel by node symmetry
}

TEST_CASE("gauss_legendre: polynomial exactness on [0,1]") {
  const QuadratureRule rule = gauss_legendre(8, 0.0, 1.0);
  for (int p = 0; p <= 15; ++p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc += rule.weights[i] * std::pow(rule.nodes[i], p);
    }
    CHECK(acc == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
  }
}

TEST_CASE("xi quadrature: normalized Gaussian polynomial moments") {
  RMatrix g0 = RMatrix::Identity(2, 2);
  const XiQuadrature quad = make_xi_quadrature(g0, 12);
  // int e^{-|xi|^2} p(xi) dxi / pi: degree <= 2*order-1 exact.
  auto integrate = [&](auto &&f) {
    double acc = 0.0;
    for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
      acc += quad.weights[k] * f(quad.nodes[k]) *
             std::exp(-quad.nodes[k].squaredNorm());
    }
    return acc;
  };
  CHECK(integrate([](const RVector &) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate([](const RVector &xi) { return xi(0) * xi(0); }) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(integrate([](const RVector &xi) {
          return xi(0) * xi(0) * xi(1) * xi(1);
        }) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(integrate([](const RVector &xi) { return xi(0); })) < 1e-13);
}

TEST_CASE("xi quadrature: whitening against an anisotropic metric") {
  RMatrix g0(2, 2);
  g0 << 2.0, 0.3, 0.3, 0.8;
  const XiQuadrature quad = make_xi_quadrature(g0, 14);
  // int e^{-xi.G0.xi} dxi / pi = det(G0)^{-1/2}.
  double acc = 0.0;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    acc += quad.weights[k] * std::exp(-quad.nodes[k].dot(g0 * quad.nodes[k]));
  }
  CHECK(acc == doctest::Approx(1.0 / std::sqrt(g0.determinant())).epsilon(1e-12));
}

TEST_CASE("xi quadrature: odd integrands cancel on the symmetric grid") {
  RMatrix g0(1, 1);
  g0 << 1.5;
  const XiQuadrature quad = make_xi_quadrature(g0, 16);
  double odd = 0.0;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    odd += quad.weights[k] * quad.nodes[k](0) *
           std::exp(-1.5 * quad.nodes[k](0) * quad.nodes[k](0));
  }
  CHECK(std::abs(odd) < 1e-14);
}

TEST_CASE("sphere_directions: unit norm and count") {
  for (int dim : {1, 2, 3}) {
    const auto dirs = sphere_directions(dim, 64);
    CHECK(dirs.size() == (dim == 1 ? 2 : 64));
    for (const RVector &d : dirs) {
      CHECK(d.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
