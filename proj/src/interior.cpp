// SPDX-License-Identifier: Apache-2.0

#include "heatkern/interior.hpp"

#include <cmath>

#include "heatkern/algebra.hpp"
#include "heatkern/parallel.hpp"

namespace heatkern {

RMatrix proxy_metric(const DiracSymbol &sym, const RVector &x) {
  const auto metric = build_metric(sym, x);
  RMatrix g0(sym.n, sym.n);
  for (int mu = 0; mu < sym.n; ++mu) {
    for (int nu = 0; nu < sym.n; ++nu) {
      g0(mu, nu) = metric[mu][nu].trace().real() / sym.N;
    }
  }
  return 0.5 * (g0 + g0.transpose());
}

double a0_integral(const std::function<CMatrix(const RVector &)> &h_of_xi,
                   const XiQuadrature &quad) {
  double acc = 0.0;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    acc += quad.weights[k] * matrix_exp(-h_of_xi(quad.nodes[k])).trace().real();
  }
  return acc;
}

DensityResult compute_a0(const DiracSymbol &sym, const RVector &x,
                         const InteriorOptions &opts) {
  const RMatrix g0 = proxy_metric(sym, x);
  auto h_of_xi = [&](const RVector &xi) { return build_H(sym, x, xi); };

  DensityResult out;
  out.value = a0_integral(h_of_xi, make_xi_quadrature(g0, opts.xi_order));
  if (opts.estimate_error) {
    const int coarse = std::max(4, opts.xi_order - 4);
    const double v2 = a0_integral(h_of_xi, make_xi_quadrature(g0, coarse));
    out.error = std::abs(out.value - v2);
    if (out.error > opts.tolerance * std::max(1.0, std::abs(out.value))) {
      out.warnings.push_back("a0 order-refinement delta " +
                             std::to_string(out.error) +
                             " exceeds the requested tolerance");
    }
  }
  return out;
}

namespace {

// K-term (coefficient of t^{1/2}): int_0^1 e^{-(1-tau)H0} K e^{-tau H} dtau,
// evaluated at one xi node.
CMatrix a1_node(const CoefficientJets &coeffs, const MatJet &h_jet,
                const RVector &xi, const QuadratureRule &tau_rule,
                const VolterraSpec &spec) {
  const HermitianEig eig = hermitian_eig(h_jet.value);
  CMatrix acc = CMatrix::Zero(coeffs.N, coeffs.N);
  for (std::size_t m = 0; m < tau_rule.nodes.size(); ++m) {
    const double tau = tau_rule.nodes[m];
    const MatJet f = exp_jet(h_jet, tau, 1, spec);
    const CMatrix k_val = apply_K(coeffs, xi, f).value;
    CVector left =
        (-(1.0 - tau) * eig.eigenvalues.array()).exp().matrix().cast<Complex>();
    acc += tau_rule.weights[m] * (eig.eigenvectors * left.asDiagonal() *
                                  eig.eigenvectors.adjoint() * k_val);
  }
  return -acc;
}

double a2_node(const CoefficientJets &coeffs, const MatJet &h_jet,
               const RVector &xi, const QuadratureRule &tau_rule,
               const VolterraSpec &spec) {
  const HermitianEig eig = hermitian_eig(h_jet.value);
  auto exp_h0 = [&](double s) {
    CVector d = (-s * eig.eigenvalues.array()).exp().matrix().cast<Complex>();
    return CMatrix(eig.eigenvectors * d.asDiagonal() * eig.eigenvectors.adjoint());
  };

  const int q = static_cast<int>(tau_rule.nodes.size());

  // Double K insertion over the simplex tau1 <= tau2 (tau1 = tau2 * s).
  CMatrix acc_kk = CMatrix::Zero(coeffs.N, coeffs.N);
  for (int m = 0; m < q; ++m) {
    const double tau2 = tau_rule.nodes[m];
    const CMatrix left = exp_h0(1.0 - tau2);
    for (int l = 0; l < q; ++l) {
      const double tau1 = tau2 * tau_rule.nodes[l];
      const double w = tau_rule.weights[m] * tau_rule.weights[l] * tau2;

      const MatJet f1 = exp_jet(h_jet, tau1, 2, spec);
      const MatJet k1 = apply_K(coeffs, xi, f1); // order 1
      const MatJet mid = exp_jet(h_jet, tau2 - tau1, 1, spec);
      const MatJet k2 = apply_K(coeffs, xi, jet_mul(mid, k1)); // order 0
      acc_kk += w * (left * k2.value);
    }
  }

  // Single DbarD insertion.
  CMatrix acc_dd = CMatrix::Zero(coeffs.N, coeffs.N);
  for (int m = 0; m < q; ++m) {
    const double tau = tau_rule.nodes[m];
    const MatJet f = exp_jet(h_jet, tau, 2, spec);
    acc_dd += tau_rule.weights[m] * (exp_h0(1.0 - tau) * apply_DbarD(coeffs, f));
  }

  return (acc_kk - acc_dd).trace().real();
}

MatJet h_jet_at(const CoefficientJets &coeffs, const RVector &xi) {
  const MatJet gamma_xi = coeffs.gamma_contract(xi);
  return jet_mul(gamma_xi, gamma_xi);
}

} // namespace

double check_a1(const DiracSymbol &sym, const RVector &x,
                const InteriorOptions &opts) {
  const JetData jets = jets_at(sym, x);
  const CoefficientJets coeffs = coefficient_jets(jets, sym.N);
  const XiQuadrature quad = make_xi_quadrature(proxy_metric(sym, x), opts.xi_order);
  const QuadratureRule tau_rule = gauss_legendre(opts.simplex_order, 0.0, 1.0);
  const VolterraSpec spec{opts.simplex_order};

  std::vector<double> contributions = parallel_map<double>(
      quad.nodes.size(), opts.threads, [&](std::size_t k) {
        const MatJet h = h_jet_at(coeffs, quad.nodes[k]);
        return quad.weights[k] *
               a1_node(coeffs, h, quad.nodes[k], tau_rule, spec).trace().real();
      });

  double acc = 0.0;
  for (double c : contributions) {
    acc += c;
  }
  return std::abs(acc);
}

DensityResult compute_a2(const DiracSymbol &sym, const RVector &x,
                         const JetData &jets, const InteriorOptions &opts) {
  const CoefficientJets coeffs = coefficient_jets(jets, sym.N);
  const RMatrix g0 = proxy_metric(sym, x);
  const VolterraSpec spec{opts.simplex_order};

  auto evaluate = [&](int xi_order) {
    const XiQuadrature quad = make_xi_quadrature(g0, xi_order);
    const QuadratureRule tau_rule = gauss_legendre(opts.simplex_order, 0.0, 1.0);
    std::vector<double> contributions = parallel_map<double>(
        quad.nodes.size(), opts.threads, [&](std::size_t k) {
          const MatJet h = h_jet_at(coeffs, quad.nodes[k]);
          return quad.weights[k] *
                 a2_node(coeffs, h, quad.nodes[k], tau_rule, spec);
        });
    double acc = 0.0;
    for (double c : contributions) {
      acc += c;
    }
    return acc;
  };

  DensityResult out;
  out.value = evaluate(opts.xi_order);
  if (opts.estimate_error) {
    const double coarse = evaluate(std::max(4, opts.xi_order - 4));
    out.error = std::abs(out.value - coarse);
    if (out.error > 1e-3 * std::max(1.0, std::abs(out.value))) {
      out.warnings.push_back("a2 quadrature self-convergence delta " +
                             std::to_string(out.error) +
                             " worse than 1e-3 relative");
    }
  }
  return out;
}

} // namespace heatkern
