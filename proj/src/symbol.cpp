// SPDX-License-Identifier: Apache-2.0

#include "heatkern/symbol.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "heatkern/quadrature.hpp"

namespace heatkern {

bool DiracSymbol::in_domain(const RVector &x) const {
  if (x.size() != n) {
    return false;
  }
  for (int mu = 0; mu < n; ++mu) {
    if (x(mu) < box_lo(mu) || x(mu) > box_hi(mu)) {
      return false;
    }
  }
  return true;
}

namespace {

std::vector<RVector> validation_points(const RVector &lo, const RVector &hi) {
  const int n = static_cast<int>(lo.size());
  std::vector<RVector> points;
  points.push_back(0.5 * (lo + hi));
  const long corners = 1L << n;
  for (long mask = 0; mask < corners; ++mask) {
    RVector x(n);
    for (int mu = 0; mu < n; ++mu) {
      x(mu) = (mask >> mu) & 1 ? hi(mu) : lo(mu);
    }
    points.push_back(x);
  }
  return points;
}

void check_domain(const DiracSymbol &sym, const RVector &x, const char *what) {
  if (!sym.in_domain(x)) {
    throw DomainError(std::string(what) + ": point outside the domain box");
  }
}

} // namespace

DiracSymbol make_dirac_symbol(int n, int N, std::vector<MatrixField> gamma,
                              MatrixField rho, std::vector<MatrixField> connection,
                              RVector box_lo, RVector box_hi) {
  if (n < 1 || N < 1) {
    throw ConfigError("make_dirac_symbol: dimensions must be positive");
  }
  if (static_cast<int>(gamma.size()) != n) {
    throw ConfigError("make_dirac_symbol: expected n Dirac matrix fields");
  }
  if (connection.empty()) {
    connection.assign(n, MatrixField::constant(n, CMatrix::Zero(N, N)));
  }
  if (static_cast<int>(connection.size()) != n) {
    throw ConfigError("make_dirac_symbol: expected n connection fields");
  }
  if (box_lo.size() != n || box_hi.size() != n || ((box_hi - box_lo).array() <= 0).any()) {
    throw ConfigError("make_dirac_symbol: invalid domain box");
  }

  DiracSymbol sym;
  sym.n = n;
  sym.N = N;
  sym.gamma = std::move(gamma);
  sym.rho = std::move(rho);
  sym.connection = std::move(connection);
  sym.box_lo = std::move(box_lo);
  sym.box_hi = std::move(box_hi);

  for (const RVector &x : validation_points(sym.box_lo, sym.box_hi)) {
    for (int mu = 0; mu < n; ++mu) {
      const CMatrix g = sym.gamma[mu].eval(x);
      require_finite(g, "make_dirac_symbol: Gamma");
      if (hermiticity_defect(g) > 1e-10 * std::max(1.0, max_abs(g))) {
        throw ValidationError("make_dirac_symbol: Gamma^" + std::to_string(mu) +
                              " is not self-adjoint at a sampled point");
      }
      const CMatrix b = sym.connection[mu].eval(x);
      require_finite(b, "make_dirac_symbol: B");
      if (antihermiticity_defect(b) > 1e-10 * std::max(1.0, max_abs(b))) {
        throw ValidationError("make_dirac_symbol: B_" + std::to_string(mu) +
                              " is not anti-self-adjoint at a sampled point");
      }
    }
    const CMatrix r = sym.rho.eval(x);
    require_finite(r, "make_dirac_symbol: rho");
    if (hermiticity_defect(r) > 1e-10 * std::max(1.0, max_abs(r))) {
      throw ValidationError("make_dirac_symbol: rho is not self-adjoint at a "
                            "sampled point");
    }
    if (std::abs(r.determinant()) <= 1e-10) {
      throw ValidationError("make_dirac_symbol: rho is degenerate at a sampled "
                            "point (|det rho| <= 1e-10)");
    }
  }
  return sym;
}

std::vector<std::vector<CMatrix>> build_metric(const DiracSymbol &sym,
                                               const RVector &x) {
  check_domain(sym, x, "build_metric");
  std::vector<CMatrix> g(sym.n);
  for (int mu = 0; mu < sym.n; ++mu) {
    g[mu] = sym.gamma[mu].eval(x);
  }
  std::vector<std::vector<CMatrix>> metric(sym.n, std::vector<CMatrix>(sym.n));
  for (int mu = 0; mu < sym.n; ++mu) {
    for (int nu = mu; nu < sym.n; ++nu) {
      CMatrix a = 0.5 * (g[mu] * g[nu] + g[nu] * g[mu]);
      metric[mu][nu] = a;
      metric[nu][mu] = a;
    }
  }
  return metric;
}

CMatrix build_H(const DiracSymbol &sym, const RVector &x, const RVector &xi) {
  check_domain(sym, x, "build_H");
  CMatrix gamma_xi = CMatrix::Zero(sym.N, sym.N);
  for (int mu = 0; mu < sym.n; ++mu) {
    gamma_xi += xi(mu) * sym.gamma[mu].eval(x);
  }
  return gamma_xi * gamma_xi;
}

namespace {

double min_eig_H(const DiracSymbol &sym, const RVector &x, const RVector &xi) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(build_H(sym, x, xi));
  return solver.eigenvalues()(0);
}

} // namespace

EllipticityVerdict ellipticity_check(const DiracSymbol &sym,
                                     const EllipticitySampleSpec &spec) {
  if (spec.grid_per_axis < 1 || spec.directions < 1) {
    throw ConfigError("ellipticity_check: empty sample grid");
  }
  const std::vector<RVector> dirs = sphere_directions(sym.n, spec.directions);

  EllipticityVerdict verdict;
  verdict.min_eigenvalue = std::numeric_limits<double>::infinity();

  auto scan_box = [&](const RVector &lo, const RVector &hi, int per_axis) {
    const long total = static_cast<long>(std::pow(per_axis, sym.n));
    for (long flat = 0; flat < total; ++flat) {
      RVector x(sym.n);
      long rem = flat;
      for (int mu = 0; mu < sym.n; ++mu) {
        const int i = static_cast<int>(rem % per_axis);
        rem /= per_axis;
        x(mu) = per_axis == 1
                    ? 0.5 * (lo(mu) + hi(mu))
                    : lo(mu) + (hi(mu) - lo(mu)) * i / (per_axis - 1.0);
      }
      for (const RVector &xi : dirs) {
        const double ev = min_eig_H(sym, x, xi);
        if (ev < verdict.min_eigenvalue) {
          verdict.min_eigenvalue = ev;
          verdict.witness_x = x;
          verdict.witness_xi = xi;
        }
      }
    }
  };

  scan_box(sym.box_lo, sym.box_hi, spec.grid_per_axis);

  if (spec.refine && verdict.witness_x.size() == sym.n) {
    // One refinement pass in a one-cell neighborhood of the minimizer.
    RVector cell = (sym.box_hi - sym.box_lo) / std::max(1, spec.grid_per_axis - 1);
    RVector lo = (verdict.witness_x - cell).cwiseMax(sym.box_lo);
    RVector hi = (verdict.witness_x + cell).cwiseMin(sym.box_hi);
    scan_box(lo, hi, spec.grid_per_axis);
  }

  verdict.elliptic = verdict.min_eigenvalue > spec.threshold;
  return verdict;
}

BoundarySplit boundary_split(const DiracSymbol &sym, const BoundaryChart &chart,
                             const RVector &xi_hat) {
  if (chart.dr.size() != sym.n ||
      static_cast<int>(chart.dxhat.size()) != sym.n - 1 ||
      xi_hat.size() != sym.n - 1) {
    throw ConfigError("boundary_split: chart covector dimensions inconsistent "
                      "with the symbol");
  }

  std::vector<CMatrix> g(sym.n);
  for (int mu = 0; mu < sym.n; ++mu) {
    g[mu] = sym.gamma[mu].eval(chart.point);
  }
  auto gamma_of = [&](const RVector &covector) {
    CMatrix out = CMatrix::Zero(sym.N, sym.N);
    for (int mu = 0; mu < sym.n; ++mu) {
      out += covector(mu) * g[mu];
    }
    return out;
  };

  BoundarySplit split;
  split.point = chart.point;
  split.xi_hat = xi_hat;
  split.A = gamma_of(chart.dr);
  split.C = CMatrix::Zero(sym.N, sym.N);
  for (int j = 0; j < sym.n - 1; ++j) {
    split.C += xi_hat(j) * gamma_of(chart.dxhat[j]);
  }
  split.B = split.A * split.C + split.C * split.A;

  Eigen::FullPivLU<CMatrix> lu(split.A);
  if (!lu.isInvertible()) {
    throw EllipticityError("boundary_split: A = Gamma(dr) is singular; the "
                           "normal direction is degenerate");
  }
  return split;
}

namespace {

FieldJet jet_of_field(const MatrixField &field, const RVector &x, double h) {
  const int n = field.manifold_dim();
  FieldJet jet;
  jet.first.resize(n);
  jet.second.assign(n, std::vector<CMatrix>(n));

  // Central differences of order h^2.
  auto shifted = [&](int mu, double step) {
    RVector y = x;
    y(mu) += step;
    return field.eval(y);
  };

  jet.value = field.eval(x);
  std::vector<CMatrix> fd_first(n);
  std::vector<std::vector<CMatrix>> fd_second(n, std::vector<CMatrix>(n));
  for (int mu = 0; mu < n; ++mu) {
    const CMatrix plus = shifted(mu, h);
    const CMatrix minus = shifted(mu, -h);
    fd_first[mu] = (plus - minus) / (2.0 * h);
    fd_second[mu][mu] = (plus - 2.0 * jet.value + minus) / (h * h);
  }
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = mu + 1; nu < n; ++nu) {
      RVector pp = x, pm = x, mp = x, mm = x;
      pp(mu) += h; pp(nu) += h;
      pm(mu) += h; pm(nu) -= h;
      mp(mu) -= h; mp(nu) += h;
      mm(mu) -= h; mm(nu) -= h;
      fd_second[mu][nu] =
          (field.eval(pp) - field.eval(pm) - field.eval(mp) + field.eval(mm)) /
          (4.0 * h * h);
      fd_second[nu][mu] = fd_second[mu][nu];
    }
  }

  if (!field.has_analytic_derivatives()) {
    jet.first = std::move(fd_first);
    jet.second = std::move(fd_second);
    return jet;
  }

  // Analytic rules win (exact jets); the finite differences guard them.
  for (int mu = 0; mu < n; ++mu) {
    jet.first[mu] = field.deriv(x, mu);
    const double scale = std::max(1.0, max_abs(jet.first[mu]));
    if (max_abs(jet.first[mu] - fd_first[mu]) > 1e-6 * scale) {
      throw ValidationError("jets_at: analytic first derivative disagrees with "
                            "central differences beyond 1e-6 relative");
    }
    for (int nu = 0; nu < n; ++nu) {
      jet.second[mu][nu] = field.deriv2(x, mu, nu);
    }
  }
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = mu; nu < n; ++nu) {
      const double scale = std::max(1.0, max_abs(jet.second[mu][nu]));
      if (max_abs(jet.second[mu][nu] - fd_second[mu][nu]) > 1e-5 * scale) {
        throw ValidationError("jets_at: analytic second derivative disagrees "
                              "with central differences");
      }
    }
  }
  return jet;
}

} // namespace

JetData jets_at(const DiracSymbol &sym, const RVector &x, double h) {
  if (h <= 0.0) {
    h = 1e-4 * (1.0 + x.norm());
  }
  if (x.size() != sym.n) {
    throw DomainError("jets_at: point dimension mismatch");
  }
  for (int mu = 0; mu < sym.n; ++mu) {
    if (x(mu) - 2.0 * h < sym.box_lo(mu) || x(mu) + 2.0 * h > sym.box_hi(mu)) {
      throw DomainError("jets_at: point closer than 2h to the domain boundary");
    }
  }

  JetData jets;
  jets.x = x;
  for (int mu = 0; mu < sym.n; ++mu) {
    jets.gamma.push_back(jet_of_field(sym.gamma[mu], x, h));
    jets.conn.push_back(jet_of_field(sym.connection[mu], x, h));
  }
  jets.rho = jet_of_field(sym.rho, x, h);
  return jets;
}

} // namespace heatkern
