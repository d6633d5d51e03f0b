// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_JETS_HPP
#define HEATKERN_JETS_HPP

#include <vector>

#include "heatkern/symbol.hpp"
#include "heatkern/types.hpp"
#include "heatkern/volterra.hpp"

namespace heatkern {

// Truncated coordinate Taylor data (value, first, second derivatives) of a
// matrix-valued function at a point. `order` tracks how many derivative
// levels are populated; products and operator applications truncate to the
// lowest order involved.
struct MatJet {
  int order = 0;
  int n = 0;
  CMatrix value;
  std::vector<CMatrix> first;               // size n when order >= 1
  std::vector<std::vector<CMatrix>> second; // n x n when order == 2

  static MatJet constant(int n, int order, const CMatrix &value);
};

MatJet jet_from_field(const FieldJet &jet, int n, int order = 2);
MatJet jet_mul(const MatJet &a, const MatJet &b);
MatJet jet_add(const MatJet &a, const MatJet &b);
MatJet jet_scale(const MatJet &a, Complex factor);
// Jet of the pointwise inverse, from the jet of the field itself.
MatJet jet_inverse(const MatJet &a);

// Coefficient jets of a Dirac symbol at one point, in the form the
// first-order and second-order operator applications consume.
struct CoefficientJets {
  int n = 0;
  int N = 0;
  std::vector<MatJet> gamma;
  std::vector<MatJet> conn;
  MatJet rho;
  MatJet rho_inv;

  MatJet gamma_contract(const RVector &xi) const; // jet of Gamma(xi)
};

CoefficientJets coefficient_jets(const JetData &jets, int N);

// (d_mu + B_mu) applied to a jet; consumes one derivative level.
MatJet apply_covariant_derivative(const CoefficientJets &coeffs, int mu,
                                  const MatJet &f);

// K f = -Gamma(xi) D f - Dbar (Gamma(xi) f), the first-order cross term of
// the conjugated operator. Consumes one derivative level.
MatJet apply_K(const CoefficientJets &coeffs, const RVector &xi, const MatJet &f);

// (Dbar D) f; consumes two derivative levels, so f must carry order 2.
CMatrix apply_DbarD(const CoefficientJets &coeffs, const MatJet &f);

// x-jets of x -> exp(-tau H(x, xi)) at the base point, from the jet of H.
// First and second derivatives are evaluated through the integral rule
//   d exp(-tau H) = -int_0^tau e^{-(tau-s)H} (dH) e^{-sH} ds,
// each integral being a (scaled) volterra_term call.
MatJet exp_jet(const MatJet &h, double tau, int order, const VolterraSpec &spec);

} // namespace heatkern

#endif
