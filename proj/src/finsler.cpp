// SPDX-License-Identifier: Apache-2.0

#include "heatkern/finsler.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace heatkern {

LeadingSymbol leading_symbol(const DiracSymbol &sym) {
  LeadingSymbol ls;
  ls.n = sym.n;
  ls.N = sym.N;
  // Copy the symbol into the closure: the adapter must outlive the argument.
  ls.H = [sym](const RVector &x, const RVector &xi) {
    return build_H(sym, x, xi);
  };
  return ls;
}

EigenBranches eigen_branches(const LeadingSymbol &sym, const RVector &x,
                             const RVector &xi) {
  if (xi.norm() == 0.0) {
    throw DomainError("eigen_branches: xi must be nonzero");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym.H(x, xi));
  EigenBranches branches;
  branches.values = solver.eigenvalues();
  branches.eigenvectors = solver.eigenvectors();
  const int count = static_cast<int>(branches.values.size());
  branches.degenerate.assign(count, false);
  const double gap_tol = 1e-8 * std::max(1e-300, branches.values.cwiseAbs().maxCoeff());
  for (int a = 0; a + 1 < count; ++a) {
    if (branches.values(a + 1) - branches.values(a) < gap_tol) {
      branches.degenerate[a] = true;
      branches.degenerate[a + 1] = true;
    }
  }
  return branches;
}

namespace {

// Eigenvalue of H(x, xi) on the branch continuously connected to the base
// eigenvector, matched by overlap rather than by index order.
double tracked_branch_value(const LeadingSymbol &sym, const RVector &x,
                            const RVector &xi, const CVector &base_vec) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym.H(x, xi));
  int best = 0;
  double best_overlap = -1.0;
  for (int b = 0; b < sym.N; ++b) {
    const double overlap = std::abs(base_vec.dot(solver.eigenvectors().col(b)));
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = b;
    }
  }
  return solver.eigenvalues()(best);
}

RMatrix half_hessian(const LeadingSymbol &sym, const RVector &x,
                     const RVector &xi, const CVector &base_vec, double step) {
  const int n = sym.n;
  auto value = [&](const RVector &p) {
    return tracked_branch_value(sym, x, p, base_vec);
  };
  const double h0 = value(xi);
  RMatrix hess(n, n);
  for (int mu = 0; mu < n; ++mu) {
    RVector plus = xi, minus = xi;
    plus(mu) += step;
    minus(mu) -= step;
    hess(mu, mu) = (value(plus) - 2.0 * h0 + value(minus)) / (step * step);
  }
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = mu + 1; nu < n; ++nu) {
      RVector pp = xi, pm = xi, mp = xi, mm = xi;
      pp(mu) += step; pp(nu) += step;
      pm(mu) += step; pm(nu) -= step;
      mp(mu) -= step; mp(nu) += step;
      mm(mu) -= step; mm(nu) -= step;
      hess(mu, nu) = (value(pp) - value(pm) - value(mp) + value(mm)) /
                     (4.0 * step * step);
      hess(nu, mu) = hess(mu, nu);
    }
  }
  return 0.5 * (hess + hess.transpose()) * 0.5;
}

} // namespace

FinslerBranch finsler_metric(const LeadingSymbol &sym, const RVector &x,
                             const RVector &xi, int branch) {
  if (branch < 0 || branch >= sym.N) {
    throw ConfigError("finsler_metric: branch index out of range");
  }
  EigenBranches branches = eigen_branches(sym, x, xi);
  const CVector base_vec = branches.eigenvectors.col(branch);
  const double step = 1e-4 * xi.norm();

  FinslerBranch out;
  out.branch = branch;
  out.h = branches.values(branch);
  if (out.h <= 0.0) {
    out.warnings.push_back("branch value not positive; symbol not elliptic here");
  }

  RMatrix g = half_hessian(sym, x, xi, base_vec, step);
  if (branches.degenerate[branch]) {
    // Degenerate branches have no well-defined Finsler metric unless the
    // branch function is exactly quadratic, in which case the central
    // difference is step-independent to rounding.
    RMatrix g_half = half_hessian(sym, x, xi, base_vec, 0.5 * step);
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g - g_half).cwiseAbs().maxCoeff() > 1e-7 * scale) {
      throw DegeneracyError("finsler_metric: eigenvalue branch is degenerate "
                            "and not exactly quadratic; metric undefined");
    }
    out.warnings.push_back("degenerate branch accepted: Hessian is exact under "
                           "step refinement (quadratic branch)");
  }
  out.g_contra = g;

  out.grad_xi = RVector(sym.n);
  for (int mu = 0; mu < sym.n; ++mu) {
    RVector plus = xi, minus = xi;
    plus(mu) += step;
    minus(mu) -= step;
    out.grad_xi(mu) = (tracked_branch_value(sym, x, plus, base_vec) -
                       tracked_branch_value(sym, x, minus, base_vec)) /
                      (2.0 * step);
  }

  Eigen::SelfAdjointEigenSolver<RMatrix> conv(g);
  if (conv.eigenvalues()(0) <= 0.0) {
    out.convex = false;
    out.warnings.push_back("convexity failure: Hessian not positive definite "
                           "(min eigenvalue " +
                           std::to_string(conv.eigenvalues()(0)) + ")");
  }
  out.homogeneity_residual =
      std::abs(xi.dot(g * xi) - out.h) / std::max(1e-300, std::abs(out.h));
  return out;
}

RMatrix covariant_metric(const FinslerBranch &branch) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(branch.g_contra);
  const double lo = solver.eigenvalues()(0);
  const double hi = solver.eigenvalues()(branch.g_contra.rows() - 1);
  if (lo <= 0.0 || hi / lo > 1e12) {
    throw IllConditionedError("covariant_metric: contravariant metric has "
                              "condition number above 1e12");
  }
  return branch.g_contra.inverse();
}

namespace {

struct PhaseVelocity {
  RVector dx;
  RVector dxi;
};

PhaseVelocity hamiltonian_velocity(const LeadingSymbol &sym, const RVector &x,
                                   const RVector &xi, const CVector &base_vec) {
  const double step_xi = 1e-4 * std::max(1.0, xi.norm());
  const double step_x = 1e-4 * (1.0 + x.norm());
  PhaseVelocity vel;
  vel.dx = RVector(sym.n);
  vel.dxi = RVector(sym.n);
  for (int mu = 0; mu < sym.n; ++mu) {
    RVector plus = xi, minus = xi;
    plus(mu) += step_xi;
    minus(mu) -= step_xi;
    vel.dx(mu) = 0.5 *
                 (tracked_branch_value(sym, x, plus, base_vec) -
                  tracked_branch_value(sym, x, minus, base_vec)) /
                 (2.0 * step_xi);
  }
  for (int mu = 0; mu < sym.n; ++mu) {
    RVector plus = x, minus = x;
    plus(mu) += step_x;
    minus(mu) -= step_x;
    vel.dxi(mu) = -0.5 *
                  (tracked_branch_value(sym, plus, xi, base_vec) -
                   tracked_branch_value(sym, minus, xi, base_vec)) /
                  (2.0 * step_x);
  }
  return vel;
}

} // namespace

FlowState hamiltonian_step(const LeadingSymbol &sym, const FlowState &state,
                           double dt) {
  EigenBranches branches = eigen_branches(sym, state.x, state.xi);
  if (branches.degenerate[state.branch]) {
    throw DegeneracyError("hamiltonian_step: branch gap below 1e-8 at t = " +
                          std::to_string(state.t));
  }
  const CVector base_vec = branches.eigenvectors.col(state.branch);

  auto velocity = [&](const RVector &x, const RVector &xi) {
    return hamiltonian_velocity(sym, x, xi, base_vec);
  };

  const PhaseVelocity k1 = velocity(state.x, state.xi);
  const PhaseVelocity k2 =
      velocity(state.x + 0.5 * dt * k1.dx, state.xi + 0.5 * dt * k1.dxi);
  const PhaseVelocity k3 =
      velocity(state.x + 0.5 * dt * k2.dx, state.xi + 0.5 * dt * k2.dxi);
  const PhaseVelocity k4 = velocity(state.x + dt * k3.dx, state.xi + dt * k3.dxi);

  FlowState next = state;
  next.x = state.x + (dt / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  next.xi =
      state.xi + (dt / 6.0) * (k1.dxi + 2.0 * k2.dxi + 2.0 * k3.dxi + k4.dxi);
  next.t = state.t + dt;
  return next;
}

} // namespace heatkern
