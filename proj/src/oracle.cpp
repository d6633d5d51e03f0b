// SPDX-License-Identifier: Apache-2.0

#include "heatkern/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "heatkern/quadrature.hpp"

namespace heatkern {

namespace {

struct StaggeredGrids {
  std::vector<double> nodes; // unknowns (Dirichlet rows eliminated)
  std::vector<double> mids;  // cell midpoints
  bool periodic = false;
};

StaggeredGrids make_grids(Geometry geometry, double length, int m) {
  StaggeredGrids grids;
  const double h = length / m;
  if (geometry == Geometry::circle) {
    grids.periodic = true;
    for (int k = 0; k < m; ++k) {
      grids.nodes.push_back(k * h);
      grids.mids.push_back((k + 0.5) * h);
    }
  } else {
    for (int k = 1; k < m; ++k) {
      grids.nodes.push_back(k * h);
    }
    for (int k = 0; k < m; ++k) {
      grids.mids.push_back((k + 0.5) * h);
    }
  }
  return grids;
}

CMatrix block_diagonal(const MatrixField &field, const std::vector<double> &grid,
                       int fiber) {
  const int g = static_cast<int>(grid.size());
  CMatrix out = CMatrix::Zero(g * fiber, g * fiber);
  RVector x(1);
  for (int k = 0; k < g; ++k) {
    x(0) = grid[k];
    out.block(k * fiber, k * fiber, fiber, fiber) = field.eval(x);
  }
  return out;
}

// Difference and averaging maps from nodes to midpoints (f_0 = f_m = 0 on
// non-periodic geometries).
void node_to_mid_maps(const StaggeredGrids &grids, double h, int fiber,
                      CMatrix &diff, CMatrix &avg) {
  const int nm = static_cast<int>(grids.mids.size());
  const int nn = static_cast<int>(grids.nodes.size());
  diff = CMatrix::Zero(nm * fiber, nn * fiber);
  avg = CMatrix::Zero(nm * fiber, nn * fiber);
  const CMatrix ident = CMatrix::Identity(fiber, fiber);
  for (int k = 0; k < nm; ++k) {
    // Midpoint k+1/2 sits between nodes k and k+1 of the full lattice.
    const int left = grids.periodic ? k : k - 1;        // index into nodes
    const int right = grids.periodic ? (k + 1) % nn : k; // index into nodes
    if (grids.periodic || left >= 0) {
      diff.block(k * fiber, left * fiber, fiber, fiber) -= ident / h;
      avg.block(k * fiber, left * fiber, fiber, fiber) += 0.5 * ident;
    }
    if (grids.periodic || right < nn) {
      diff.block(k * fiber, right * fiber, fiber, fiber) += ident / h;
      avg.block(k * fiber, right * fiber, fiber, fiber) += 0.5 * ident;
    }
  }
}

CMatrix dirac_matrix(const DiracSymbol &sym, const StaggeredGrids &grids,
                     double h) {
  const int fiber = sym.N;
  CMatrix diff, avg;
  node_to_mid_maps(grids, h, fiber, diff, avg);

  const CMatrix rho_inv_nodes =
      block_diagonal(sym.rho, grids.nodes, fiber).partialPivLu().inverse();
  const CMatrix b_mid = block_diagonal(sym.connection[0], grids.mids, fiber);
  const CMatrix gamma_rho_mid =
      block_diagonal(sym.gamma[0], grids.mids, fiber) *
      block_diagonal(sym.rho, grids.mids, fiber);

  return Complex(0.0, 1.0) * gamma_rho_mid * (diff + b_mid * avg) *
         rho_inv_nodes;
}

CMatrix laplacian_matrix(const DiracSymbol &sym, const StaggeredGrids &grids,
                         double h) {
  const int fiber = sym.N;
  CMatrix diff, avg;
  node_to_mid_maps(grids, h, fiber, diff, avg);

  const CMatrix rho_inv_nodes =
      block_diagonal(sym.rho, grids.nodes, fiber).partialPivLu().inverse();
  const CMatrix b_mid = block_diagonal(sym.connection[0], grids.mids, fiber);
  const CMatrix e = (diff + b_mid * avg) * rho_inv_nodes;

  const CMatrix rho_mid = block_diagonal(sym.rho, grids.mids, fiber);
  const CMatrix gamma_mid = block_diagonal(sym.gamma[0], grids.mids, fiber);
  // rho a rho at midpoints, a = Gamma^2 in one dimension. Sign convention:
  // spectrum bounded below (flat case -> -d^2/dx^2).
  const CMatrix weight = rho_mid * gamma_mid * gamma_mid * rho_mid;
  return e.adjoint() * weight * e;
}

} // namespace

DiscretizedOperator discretize(const DiracSymbol &sym, Geometry geometry,
                               double length, int m, OperatorKind kind) {
  if (sym.n != 1) {
    throw ConfigError("discretize: geometry-based discretization requires a "
                      "1-d symbol");
  }
  if (m < 16) {
    throw ConfigError("discretize: resolution m must be at least 16");
  }
  const StaggeredGrids grids = make_grids(geometry, length, m);
  const double h = length / m;

  DiscretizedOperator op;
  op.geometry = geometry;
  op.kind = kind;
  op.m = m;
  op.length = length;
  op.fiber = sym.N;

  const CMatrix d = dirac_matrix(sym, grids, h);
  switch (kind) {
  case OperatorKind::dirac:
    op.matrix = d;
    break;
  case OperatorKind::dirac_adjoint:
    op.matrix = d.adjoint();
    break;
  case OperatorKind::dbar_d:
    op.matrix = d.adjoint() * d;
    break;
  case OperatorKind::d_dbar:
    op.matrix = d * d.adjoint();
    break;
  case OperatorKind::laplacian:
    op.matrix = laplacian_matrix(sym, grids, h);
    break;
  }
  return op;
}

DiscretizedOperator discretize_frozen_halfline(const BoundarySplit &split,
                                               double radius, int m) {
  if (m < 16) {
    throw ConfigError("discretize_frozen_halfline: resolution m must be at "
                      "least 16");
  }
  const int fiber = static_cast<int>(split.A.rows());
  const double h = radius / m;
  const int nn = m - 1; // interior nodes, Dirichlet rows eliminated

  const CMatrix a2 = split.A * split.A;
  const CMatrix c2 = split.C * split.C;
  const Complex mi(0.0, -1.0);

  CMatrix op = CMatrix::Zero(nn * fiber, nn * fiber);
  for (int k = 0; k < nn; ++k) {
    op.block(k * fiber, k * fiber, fiber, fiber) = 2.0 / (h * h) * a2 + c2;
    if (k > 0) {
      op.block(k * fiber, (k - 1) * fiber, fiber, fiber) =
          -a2 / (h * h) + mi * split.B * (-1.0 / (2.0 * h));
    }
    if (k + 1 < nn) {
      op.block(k * fiber, (k + 1) * fiber, fiber, fiber) =
          -a2 / (h * h) + mi * split.B * (1.0 / (2.0 * h));
    }
  }

  DiscretizedOperator out;
  out.geometry = Geometry::halfline;
  out.kind = OperatorKind::dbar_d;
  out.m = m;
  out.length = radius;
  out.fiber = fiber;
  out.matrix = op;
  return out;
}

double halfline_radius(const BoundarySplit &split) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(
      split.C * split.C + CMatrix::Identity(split.C.rows(), split.C.cols()));
  return 20.0 / std::sqrt(eig.eigenvalues()(0));
}

RVector dense_spectrum(const DiscretizedOperator &op, double herm_tol) {
  const double defect = hermiticity_defect(op.matrix);
  if (defect > herm_tol * std::max(1.0, max_abs(op.matrix))) {
    throw ValidationError("dense_spectrum: operator is not Hermitian (defect " +
                          std::to_string(defect) + ")");
  }
  CMatrix work = 0.5 * (op.matrix + op.matrix.adjoint());
  const lapack_int dim = static_cast<lapack_int>(work.rows());
  RVector eigenvalues(dim);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', dim, work.data(), dim,
                     eigenvalues.data());
  if (info != 0) {
    throw Error("dense_spectrum: zheevd failed with info " +
                std::to_string(info));
  }
  return eigenvalues;
}

double frozen_interior_density(const BoundarySplit &split, double t, int nodes) {
  // int domega/2pi tr exp(-t (A omega + C)^2) via the tan-mapped line.
  const QuadratureRule rule = gauss_legendre(nodes, -M_PI / 2.0, M_PI / 2.0);
  const CMatrix a2 = split.A * split.A;
  const CMatrix c2 = split.C * split.C;
  double acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double omega = std::tan(rule.nodes[k]);
    const double sec2 =
        1.0 / (std::cos(rule.nodes[k]) * std::cos(rule.nodes[k]));
    const CMatrix h = t * (a2 * (omega * omega) + split.B * omega + c2);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (h + h.adjoint()),
                                               Eigen::EigenvaluesOnly);
    acc += rule.weights[k] * sec2 / (2.0 * M_PI) *
           (-eig.eigenvalues().array()).exp().sum();
  }
  return acc;
}

double halfline_boundary_term(const RVector &spectrum, const BoundarySplit &split,
                              double radius, double t) {
  // Boundary part of the truncated trace, normalized so that the result is
  // Psi1 evaluated at the sqrt(t)-rescaled tangential covector:
  //   Tr(t) - R I(t) = Psi1(sqrt(t) xihat) / sqrt(pi)  (two Dirichlet ends).
  return std::sqrt(M_PI) *
         (heat_trace(spectrum, t) -
          radius * frozen_interior_density(split, t));
}

double heat_trace(const RVector &spectrum, double t) {
  if (t <= 0.0) {
    throw DomainError("heat_trace: t must be positive");
  }
  double acc = 0.0;
  // Ascending eigenvalues: sum smallest exponents last.
  for (Eigen::Index k = spectrum.size() - 1; k >= 0; --k) {
    acc += std::exp(-t * spectrum(k));
  }
  return acc;
}

RVector heat_time_grid(double t_lo, double t_hi, int count) {
  if (t_lo <= 0.0 || t_hi <= t_lo || count < 2) {
    throw ConfigError("heat_time_grid: need 0 < t_lo < t_hi and count >= 2");
  }
  RVector grid(count);
  for (int i = 0; i < count; ++i) {
    grid(i) =
        t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (count - 1));
  }
  return grid;
}

namespace {

struct FitResult {
  std::vector<double> coeffs;
  double residual;
  double condition;
};

FitResult weighted_fit(const RVector &spectrum, int n_dim, const RVector &t_grid,
                       int k_max, bool even_only) {
  std::vector<int> orders;
  for (int k = 0; k <= k_max; ++k) {
    if (!even_only || k % 2 == 0) {
      orders.push_back(k);
    }
  }
  const int rows = static_cast<int>(t_grid.size());
  const int cols = static_cast<int>(orders.size());
  RMatrix design(rows, cols);
  RVector target(rows);
  for (int i = 0; i < rows; ++i) {
    const double t = t_grid(i);
    const double trace = heat_trace(spectrum, t);
    const double weight = 1.0 / std::max(1e-300, trace); // relative residuals
    for (int k = 0; k < cols; ++k) {
      design(i, k) = weight * std::pow(4.0 * M_PI * t, -0.5 * n_dim) *
                     std::pow(t, 0.5 * orders[k]);
    }
    target(i) = weight * trace;
  }

  Eigen::JacobiSVD<RMatrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  FitResult fit;
  fit.condition = svd.singularValues()(0) /
                  svd.singularValues()(svd.singularValues().size() - 1);
  if (fit.condition > 1e10) {
    throw IllConditionedError(
        "fit_heat_invariants: design condition exceeds 1e10; widen or shift "
        "the t-window toward larger t");
  }
  RVector beta = svd.solve(target);
  fit.coeffs.assign(k_max + 1, 0.0);
  for (int k = 0; k < cols; ++k) {
    fit.coeffs[orders[k]] = beta(k);
  }
  fit.residual = (design * beta - target).norm() / std::sqrt(double(rows));
  return fit;
}

} // namespace

HeatFit fit_heat_invariants(const RVector &spectrum, int manifold_dim,
                            const RVector &t_grid, int k_max, bool even_only) {
  if (t_grid.size() < k_max + 2) {
    throw ConfigError("fit_heat_invariants: t-grid too small for the requested "
                      "order");
  }
  const FitResult full =
      weighted_fit(spectrum, manifold_dim, t_grid, k_max, even_only);

  // Stability probe: refit on the lower half of the window.
  const int half_count = std::max(k_max + 2, static_cast<int>(t_grid.size()) / 2);
  RVector half_grid = t_grid.head(half_count);
  const FitResult half =
      weighted_fit(spectrum, manifold_dim, half_grid, k_max, even_only);

  HeatFit out;
  out.coeffs = full.coeffs;
  out.residual = full.residual;
  out.condition = full.condition;
  out.uncertainty.resize(full.coeffs.size());
  for (std::size_t k = 0; k < full.coeffs.size(); ++k) {
    out.uncertainty[k] = std::abs(full.coeffs[k] - half.coeffs[k]);
  }
  return out;
}

IndexCheck index_check(const DiracSymbol &sym, double length, int m) {
  const DiscretizedOperator dbar_d =
      discretize(sym, Geometry::circle, length, m, OperatorKind::dbar_d);
  const DiscretizedOperator d_dbar =
      discretize(sym, Geometry::circle, length, m, OperatorKind::d_dbar);
  const RVector spec1 = dense_spectrum(dbar_d);
  const RVector spec2 = dense_spectrum(d_dbar);

  const double lam_max =
      std::max(spec1(spec1.size() - 1), spec2(spec2.size() - 1));
  const double threshold = 1e-6 * lam_max;

  IndexCheck out;
  std::vector<double> nz1, nz2;
  int zeros1 = 0, zeros2 = 0;
  auto classify = [&](const RVector &spec, std::vector<double> &nz, int &zeros) {
    for (Eigen::Index k = 0; k < spec.size(); ++k) {
      const double lam = spec(k);
      if (std::abs(lam) <= threshold) {
        ++zeros;
      } else {
        nz.push_back(lam);
      }
      if (std::abs(lam) > threshold / 10.0 && std::abs(lam) < threshold * 10.0) {
        out.flags.push_back("eigenvalue " + std::to_string(lam) +
                            " within a factor 10 of the zero-mode threshold");
      }
    }
  };
  classify(spec1, nz1, zeros1);
  classify(spec2, nz2, zeros2);
  out.index = zeros1 - zeros2;

  const std::size_t paired = std::min(nz1.size(), nz2.size());
  if (nz1.size() != nz2.size()) {
    out.flags.push_back("nonzero spectra have different lengths (" +
                        std::to_string(nz1.size()) + " vs " +
                        std::to_string(nz2.size()) + ")");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < paired; ++k) {
    worst = std::max(worst, std::abs(nz1[k] - nz2[k]) /
                                std::max(std::abs(nz1[k]), std::abs(nz2[k])));
  }
  out.paired_residual = worst;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double t : {0.1, 0.5, 1.0, 2.0}) {
    const double diff = heat_trace(spec1, t) - heat_trace(spec2, t);
    out.trace_diff_samples.emplace_back(t, diff);
    lo = std::min(lo, diff);
    hi = std::max(hi, diff);
  }
  out.trace_diff_spread = hi - lo;
  return out;
}

} // namespace heatkern
