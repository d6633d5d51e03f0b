// SPDX-License-Identifier: Apache-2.0

#include "heatkern/jets.hpp"

#include "heatkern/algebra.hpp"

namespace heatkern {

MatJet MatJet::constant(int n, int order, const CMatrix &value) {
  MatJet jet;
  jet.order = order;
  jet.n = n;
  jet.value = value;
  const CMatrix zero = CMatrix::Zero(value.rows(), value.cols());
  if (order >= 1) {
    jet.first.assign(n, zero);
  }
  if (order >= 2) {
    jet.second.assign(n, std::vector<CMatrix>(n, zero));
  }
  return jet;
}

MatJet jet_from_field(const FieldJet &jet, int n, int order) {
  MatJet out;
  out.order = order;
  out.n = n;
  out.value = jet.value;
  if (order >= 1) {
    out.first = jet.first;
  }
  if (order >= 2) {
    out.second = jet.second;
  }
  return out;
}

MatJet jet_mul(const MatJet &a, const MatJet &b) {
  MatJet out;
  out.order = std::min(a.order, b.order);
  out.n = a.n;
  out.value = a.value * b.value;
  if (out.order >= 1) {
    out.first.resize(out.n);
    for (int mu = 0; mu < out.n; ++mu) {
      out.first[mu] = a.first[mu] * b.value + a.value * b.first[mu];
    }
  }
  if (out.order >= 2) {
    out.second.assign(out.n, std::vector<CMatrix>(out.n));
    for (int mu = 0; mu < out.n; ++mu) {
      for (int nu = 0; nu < out.n; ++nu) {
        out.second[mu][nu] = a.second[mu][nu] * b.value +
                             a.first[mu] * b.first[nu] +
                             a.first[nu] * b.first[mu] +
                             a.value * b.second[mu][nu];
      }
    }
  }
  return out;
}

MatJet jet_add(const MatJet &a, const MatJet &b) {
  MatJet out;
  out.order = std::min(a.order, b.order);
  out.n = a.n;
  out.value = a.value + b.value;
  if (out.order >= 1) {
    out.first.resize(out.n);
    for (int mu = 0; mu < out.n; ++mu) {
      out.first[mu] = a.first[mu] + b.first[mu];
    }
  }
  if (out.order >= 2) {
    out.second.assign(out.n, std::vector<CMatrix>(out.n));
    for (int mu = 0; mu < out.n; ++mu) {
      for (int nu = 0; nu < out.n; ++nu) {
        out.second[mu][nu] = a.second[mu][nu] + b.second[mu][nu];
      }
    }
  }
  return out;
}

MatJet jet_scale(const MatJet &a, Complex factor) {
  MatJet out = a;
  out.value *= factor;
  for (CMatrix &m : out.first) {
    m *= factor;
  }
  for (auto &row : out.second) {
    for (CMatrix &m : row) {
      m *= factor;
    }
  }
  return out;
}

MatJet jet_inverse(const MatJet &a) {
  MatJet out;
  out.order = a.order;
  out.n = a.n;
  const CMatrix inv = a.value.partialPivLu().inverse();
  out.value = inv;
  if (a.order >= 1) {
    out.first.resize(a.n);
    for (int mu = 0; mu < a.n; ++mu) {
      out.first[mu] = -inv * a.first[mu] * inv;
    }
  }
  if (a.order >= 2) {
    out.second.assign(a.n, std::vector<CMatrix>(a.n));
    for (int mu = 0; mu < a.n; ++mu) {
      for (int nu = 0; nu < a.n; ++nu) {
        out.second[mu][nu] = -inv * a.second[mu][nu] * inv +
                             inv * a.first[nu] * inv * a.first[mu] * inv +
                             inv * a.first[mu] * inv * a.first[nu] * inv;
      }
    }
  }
  return out;
}

MatJet CoefficientJets::gamma_contract(const RVector &xi) const {
  MatJet out = jet_scale(gamma[0], xi(0));
  for (int mu = 1; mu < n; ++mu) {
    out = jet_add(out, jet_scale(gamma[mu], xi(mu)));
  }
  return out;
}

CoefficientJets coefficient_jets(const JetData &jets, int N) {
  CoefficientJets coeffs;
  coeffs.n = static_cast<int>(jets.gamma.size());
  coeffs.N = N;
  for (int mu = 0; mu < coeffs.n; ++mu) {
    coeffs.gamma.push_back(jet_from_field(jets.gamma[mu], coeffs.n));
    coeffs.conn.push_back(jet_from_field(jets.conn[mu], coeffs.n));
  }
  coeffs.rho = jet_from_field(jets.rho, coeffs.n);
  coeffs.rho_inv = jet_inverse(coeffs.rho);
  return coeffs;
}

MatJet apply_covariant_derivative(const CoefficientJets &coeffs, int mu,
                                  const MatJet &f) {
  if (f.order < 1) {
    throw Error("apply_covariant_derivative: jet order exhausted");
  }
  const MatJet &b = coeffs.conn[mu];
  MatJet out;
  out.order = f.order - 1;
  out.n = f.n;
  out.value = f.first[mu] + b.value * f.value;
  if (out.order >= 1) {
    out.first.resize(out.n);
    for (int nu = 0; nu < out.n; ++nu) {
      out.first[nu] =
          f.second[mu][nu] + b.first[nu] * f.value + b.value * f.first[nu];
    }
  }
  return out;
}

namespace {

// P(f) = sum_mu Gamma^mu rho (d_mu + B_mu)(rho^{-1} f)  =  (D/i) f.
MatJet dirac_core(const CoefficientJets &coeffs, const MatJet &f) {
  const MatJet g = jet_mul(coeffs.rho_inv, f);
  MatJet acc;
  for (int mu = 0; mu < coeffs.n; ++mu) {
    MatJet term = jet_mul(
        coeffs.gamma[mu],
        jet_mul(coeffs.rho, apply_covariant_derivative(coeffs, mu, g)));
    acc = mu == 0 ? term : jet_add(acc, term);
  }
  return acc;
}

} // namespace

MatJet apply_K(const CoefficientJets &coeffs, const RVector &xi, const MatJet &f) {
  const MatJet gamma_xi = coeffs.gamma_contract(xi);

  // -Gamma(xi) D f = -i Gamma(xi) P(f)
  const MatJet t1 = jet_mul(gamma_xi, dirac_core(coeffs, f));

  // -Dbar(Gamma(xi) f) = -i sum_nu rho^{-1} (d_nu + B_nu)(rho Gamma^nu Gamma(xi) f)
  const MatJet gf = jet_mul(gamma_xi, f);
  MatJet t2;
  for (int nu = 0; nu < coeffs.n; ++nu) {
    MatJet w = jet_mul(coeffs.rho, jet_mul(coeffs.gamma[nu], gf));
    MatJet term = jet_mul(coeffs.rho_inv, apply_covariant_derivative(coeffs, nu, w));
    t2 = nu == 0 ? term : jet_add(t2, term);
  }

  return jet_scale(jet_add(t1, t2), Complex(0.0, -1.0));
}

CMatrix apply_DbarD(const CoefficientJets &coeffs, const MatJet &f) {
  if (f.order < 2) {
    throw Error("apply_DbarD: order-2 jet required");
  }
  const MatJet p = dirac_core(coeffs, f); // order 1
  CMatrix acc = CMatrix::Zero(coeffs.N, coeffs.N);
  for (int nu = 0; nu < coeffs.n; ++nu) {
    MatJet w = jet_mul(coeffs.rho, jet_mul(coeffs.gamma[nu], p));
    acc += (coeffs.rho_inv.value *
            apply_covariant_derivative(coeffs, nu, w).value);
  }
  return -acc;
}

MatJet exp_jet(const MatJet &h, double tau, int order, const VolterraSpec &spec) {
  const int n = h.n;
  MatJet out;
  out.order = order;
  out.n = n;
  out.value = matrix_exp(-tau * h.value);
  if (order >= 1) {
    out.first.resize(n);
    for (int mu = 0; mu < n; ++mu) {
      out.first[mu] = -tau * volterra_term(tau * h.value, {h.first[mu]}, spec);
    }
  }
  if (order >= 2) {
    out.second.assign(n, std::vector<CMatrix>(n));
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = mu; nu < n; ++nu) {
        CMatrix cross =
            tau * tau *
            volterra_term(tau * h.value, {h.first[nu], h.first[mu]}, spec);
        if (mu == nu) {
          cross *= 2.0;
        } else {
          cross += tau * tau *
                   volterra_term(tau * h.value, {h.first[mu], h.first[nu]}, spec);
        }
        out.second[mu][nu] =
            cross - tau * volterra_term(tau * h.value, {h.second[mu][nu]}, spec);
        out.second[nu][mu] = out.second[mu][nu];
      }
    }
  }
  return out;
}

} // namespace heatkern
