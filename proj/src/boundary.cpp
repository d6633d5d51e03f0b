// SPDX-License-Identifier: Apache-2.0

#include "heatkern/boundary.hpp"

#include <cmath>

#include <Eigen/LU>

#include "heatkern/algebra.hpp"
#include "heatkern/parallel.hpp"
#include "heatkern/quadrature.hpp"

namespace heatkern {

CMatrix resolvent_symbol(const BoundarySplit &split, Complex lambda,
                         Complex omega) {
  return pencil_resolvent(split.A * split.A, split.B, split.C * split.C, lambda,
                          omega);
}

ResolventPoles resolvent_poles(const BoundarySplit &split, Complex lambda) {
  PencilSpectrum spectrum;
  try {
    spectrum = pencil_roots(split.A * split.A, split.B, split.C * split.C, lambda);
  } catch (const DegeneracyError &) {
    // Simple roots are generic; one retry with a perturbed lambda.
    const Complex nudged = lambda + Complex(0.0, 1e-6) * (1.0 + std::abs(lambda));
    spectrum =
        pencil_roots(split.A * split.A, split.B, split.C * split.C, nudged);
  }

  double omega_scale = 1.0;
  for (const Complex &w : spectrum.roots) {
    omega_scale = std::max(omega_scale, std::abs(w));
  }
  const double cluster_tol = 1e-7 * omega_scale;

  ResolventPoles out;
  std::vector<bool> used(spectrum.roots.size(), false);
  for (std::size_t j = 0; j < spectrum.roots.size(); ++j) {
    if (used[j]) {
      continue;
    }
    Complex pole = spectrum.roots[j];
    CMatrix residue = spectrum.residues[j];
    int members = 1;
    for (std::size_t k = j + 1; k < spectrum.roots.size(); ++k) {
      if (!used[k] && std::abs(spectrum.roots[k] - pole) < cluster_tol) {
        used[k] = true;
        residue += spectrum.residues[k];
        pole += (spectrum.roots[k] - pole) / double(++members); // running mean
      }
    }
    out.poles.push_back(pole);
    out.residues.push_back(residue);
  }

  CMatrix total = CMatrix::Zero(split.A.rows(), split.A.cols());
  for (const CMatrix &r : out.residues) {
    total += r;
  }
  out.reconstruction_defect = max_abs(total);
  return out;
}

CMatrix phi(const BoundarySplit &split, Complex lambda, double y) {
  const ResolventPoles poles = resolvent_poles(split, lambda);
  const Eigen::Index dim = split.A.rows();
  CMatrix acc = CMatrix::Zero(dim, dim);
  if (y >= 0.0) {
    for (std::size_t c = 0; c < poles.poles.size(); ++c) {
      if (poles.poles[c].imag() > 0.0) {
        acc += std::exp(Complex(0.0, 1.0) * poles.poles[c] * y) *
               poles.residues[c];
      }
    }
    return Complex(0.0, 1.0) * acc;
  }
  for (std::size_t c = 0; c < poles.poles.size(); ++c) {
    if (poles.poles[c].imag() < 0.0) {
      acc += std::exp(Complex(0.0, 1.0) * poles.poles[c] * y) * poles.residues[c];
    }
  }
  return Complex(0.0, -1.0) * acc;
}

namespace {

// Residue of R^2 at cluster c: sum over other clusters of
// (P_c P_k + P_k P_c) / (omega_c - omega_k).
CMatrix residue_of_r_squared(const ResolventPoles &poles, std::size_t c) {
  const Eigen::Index dim = poles.residues[c].rows();
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < poles.poles.size(); ++k) {
    if (k == c) {
      continue;
    }
    const Complex gap = poles.poles[c] - poles.poles[k];
    acc += (poles.residues[c] * poles.residues[k] +
            poles.residues[k] * poles.residues[c]) /
           gap;
  }
  return acc;
}

struct Phi0Pair {
  CMatrix phi0;
  CMatrix dphi0;
};

Phi0Pair phi0_by_residues(const BoundarySplit &split, Complex lambda,
                          double *defect = nullptr) {
  const ResolventPoles poles = resolvent_poles(split, lambda);
  const Eigen::Index dim = split.A.rows();
  Phi0Pair out;
  out.phi0 = CMatrix::Zero(dim, dim);
  out.dphi0 = CMatrix::Zero(dim, dim);
  for (std::size_t c = 0; c < poles.poles.size(); ++c) {
    if (poles.poles[c].imag() > 0.0) {
      out.phi0 += poles.residues[c];
      out.dphi0 += residue_of_r_squared(poles, c);
    }
  }
  out.phi0 *= Complex(0.0, 1.0);
  out.dphi0 *= Complex(0.0, 1.0);
  if (defect != nullptr) {
    *defect = poles.reconstruction_defect;
  }
  return out;
}

Phi0Pair phi0_by_quadrature(const BoundarySplit &split, Complex lambda,
                            int nodes = 256) {
  // omega = tan(theta) maps the real line onto (-pi/2, pi/2); the algebraic
  // omega^{-2} tail becomes a smooth bounded integrand.
  const QuadratureRule rule = gauss_legendre(nodes, -M_PI / 2.0, M_PI / 2.0);
  const Eigen::Index dim = split.A.rows();
  Phi0Pair out;
  out.phi0 = CMatrix::Zero(dim, dim);
  out.dphi0 = CMatrix::Zero(dim, dim);
  for (int k = 0; k < nodes; ++k) {
    const double theta = rule.nodes[k];
    const double omega = std::tan(theta);
    const double sec2 = 1.0 / (std::cos(theta) * std::cos(theta));
    const CMatrix r = resolvent_symbol(split, lambda, omega);
    const double w = rule.weights[k] * sec2 / (2.0 * M_PI);
    out.phi0 += w * r;
    out.dphi0 += w * (r * r);
  }
  return out;
}

Phi0Pair phi0_by_closed_form(const BoundarySplit &split, Complex lambda) {
  if (max_abs(split.B) > 1e-12 * std::max(1.0, max_abs(split.A) * max_abs(split.C))) {
    throw ConfigError("phi0: closed form requires B = AC + CA = 0");
  }
  const Eigen::Index dim = split.A.rows();
  const CMatrix a_inv = split.A.partialPivLu().inverse();
  const CMatrix m =
      a_inv * (split.C * split.C - lambda * CMatrix::Identity(dim, dim)) * a_inv;
  const CMatrix mu = matrix_sqrt_analytic(m);
  const CMatrix mu_inv = mu.partialPivLu().inverse();

  Phi0Pair out;
  out.phi0 = 0.5 * a_inv * mu_inv * a_inv;

  // d(mu)/dlambda solves the Sylvester equation mu X + X mu = -A^{-2}.
  const CMatrix rhs = -(a_inv * a_inv);
  const Eigen::Index nn = dim * dim;
  CMatrix kron = CMatrix::Zero(nn, nn);
  const CMatrix ident = CMatrix::Identity(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index k = 0; k < dim; ++k) {
        for (Eigen::Index l = 0; l < dim; ++l) {
          // vec is column-major: entry (k + dim*l) of column block.
          kron(i + dim * j, k + dim * l) =
              mu(i, k) * (j == l ? 1.0 : 0.0) + (i == k ? 1.0 : 0.0) * mu(l, j);
        }
      }
    }
  }
  CVector rhs_vec(nn);
  for (Eigen::Index l = 0; l < dim; ++l) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      rhs_vec(k + dim * l) = rhs(k, l);
    }
  }
  const CVector x_vec = kron.partialPivLu().solve(rhs_vec);
  CMatrix dmu(dim, dim);
  for (Eigen::Index l = 0; l < dim; ++l) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      dmu(k, l) = x_vec(k + dim * l);
    }
  }
  out.dphi0 = 0.5 * a_inv * (-mu_inv * dmu * mu_inv) * a_inv;
  return out;
}

} // namespace

ResolventSlice phi0(const BoundarySplit &split, Complex lambda, Phi0Method method) {
  ResolventSlice slice;
  slice.lambda = lambda;
  slice.xi_hat = split.xi_hat;
  slice.method = method;
  switch (method) {
  case Phi0Method::residue: {
    const Phi0Pair pair = phi0_by_residues(split, lambda, &slice.residual);
    slice.phi0 = pair.phi0;
    slice.dphi0 = pair.dphi0;
    break;
  }
  case Phi0Method::quadrature: {
    const Phi0Pair pair = phi0_by_quadrature(split, lambda);
    slice.phi0 = pair.phi0;
    slice.dphi0 = pair.dphi0;
    // Cross-validate against the residue route.
    const Phi0Pair ref = phi0_by_residues(split, lambda);
    slice.residual = max_abs(slice.phi0 - ref.phi0);
    if (slice.residual > 1e-6 * std::max(1.0, max_abs(ref.phi0))) {
      throw Error("phi0: quadrature and residue evaluations disagree beyond "
                  "1e-6 (delta " +
                  std::to_string(slice.residual) + ")");
    }
    break;
  }
  case Phi0Method::closed_form: {
    const Phi0Pair pair = phi0_by_closed_form(split, lambda);
    slice.phi0 = pair.phi0;
    slice.dphi0 = pair.dphi0;
    break;
  }
  }
  return slice;
}

HalflineSolution solve_halfline_ode(const BoundarySplit &split, Complex lambda,
                                    const CVector &f) {
  const ResolventSlice slice = phi0(split, lambda);
  Eigen::FullPivLU<CMatrix> lu(slice.phi0);
  if (!lu.isInvertible()) {
    throw EllipticityError("solve_halfline_ode: Phi0 is singular; the Dirichlet "
                           "boundary value problem is not elliptic at this "
                           "(lambda, xihat)");
  }
  const CVector coeff = lu.solve(f);

  HalflineSolution solution;
  solution.phi0 = slice.phi0;
  const BoundarySplit split_copy = split;
  solution.eval = [split_copy, lambda, coeff](double r) {
    return CVector(phi(split_copy, lambda, r) * coeff);
  };
  return solution;
}

Psi1Result psi1(const BoundarySplit &split, const ContourSpec &contour) {
  if (contour.vertex >= 0.0) {
    throw ContourError("psi1: contour vertex must sit strictly left of the "
                       "spectral cut on the positive real axis");
  }
  if (contour.nodes < 4) {
    throw ContourError("psi1: too few contour nodes");
  }

  // The upward vertical line at Re lambda = w deforms onto this parabola
  // wrapping the spectral cut clockwise: Im lambda runs from below to above.
  const double du = 2.0 * contour.halfwidth / (contour.nodes - 1);
  Complex acc(0.0, 0.0);
  Complex acc_coarse(0.0, 0.0);
  for (int k = 0; k < contour.nodes; ++k) {
    const double u = -contour.halfwidth + k * du;
    const Complex lambda(contour.vertex + u * u, 2.0 * contour.slope * u);
    const Complex dlambda(2.0 * u, 2.0 * contour.slope);

    const Phi0Pair pair = phi0_by_residues(split, lambda);
    Eigen::FullPivLU<CMatrix> lu(pair.phi0);
    if (!lu.isInvertible()) {
      throw ContourError("psi1: Phi0 degenerate at a contour node; the contour "
                         "intersects the spectral region");
    }
    const Complex g = (lu.solve(pair.dphi0)).trace();
    const double trap = (k == 0 || k == contour.nodes - 1) ? 0.5 : 1.0;
    const Complex term = trap * std::exp(-lambda) * g * dlambda * du;
    acc += term;
    if (k % 2 == 0) {
      acc_coarse += 2.0 * term; // same trapezoid on the doubled spacing
    }
  }

  const Complex prefactor =
      -std::sqrt(M_PI) / Complex(0.0, 2.0 * M_PI); // -sqrt(pi)/(2 pi i)
  Psi1Result result;
  const Complex full = prefactor * acc;
  const Complex coarse = prefactor * acc_coarse;
  result.value = full.real();
  result.coarse_value = coarse.real();
  result.imag_defect = std::abs(full.imag());
  return result;
}

namespace {

RMatrix tangential_proxy_metric(const DiracSymbol &sym, const BoundaryChart &chart) {
  const int nt = static_cast<int>(chart.dxhat.size());
  std::vector<CMatrix> gamma_t(nt);
  for (int j = 0; j < nt; ++j) {
    CMatrix g = CMatrix::Zero(sym.N, sym.N);
    for (int mu = 0; mu < sym.n; ++mu) {
      g += chart.dxhat[j](mu) * sym.gamma[mu].eval(chart.point);
    }
    gamma_t[j] = g;
  }
  RMatrix g0(nt, nt);
  for (int j = 0; j < nt; ++j) {
    for (int k = 0; k < nt; ++k) {
      g0(j, k) =
          0.5 * ((gamma_t[j] * gamma_t[k] + gamma_t[k] * gamma_t[j]).trace())
                    .real() /
          sym.N;
    }
  }
  return 0.5 * (g0 + g0.transpose());
}

} // namespace

A1Result compute_A1(const DiracSymbol &sym,
                    const std::vector<BoundaryMeshPoint> &mesh,
                    const A1Options &opts) {
  if (mesh.empty()) {
    throw ConfigError("compute_A1: empty boundary mesh");
  }

  A1Result result;
  result.per_point.resize(mesh.size());

  struct Task {
    std::size_t point;
    RVector xi_hat;
    double weight;
  };
  std::vector<Task> tasks;

  for (std::size_t p = 0; p < mesh.size(); ++p) {
    const BoundaryMeshPoint &mp = mesh[p];
    if (sym.n == 1) {
      tasks.push_back({p, RVector(0), 1.0});
      continue;
    }
    const RMatrix g0 = tangential_proxy_metric(sym, mp.chart);
    const XiQuadrature quad = make_xi_quadrature(g0, opts.xi_order);
    for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
      // Psi1 is even in xihat: keep the half-grid with positive leading
      // coordinate and double its weight.
      const RVector &node = quad.nodes[k];
      double lead = 0.0;
      for (int j = 0; j < node.size(); ++j) {
        if (std::abs(node(j)) > 1e-14) {
          lead = node(j);
          break;
        }
      }
      if (lead < 0.0) {
        continue;
      }
      const double factor = lead > 0.0 ? 2.0 : 1.0;
      tasks.push_back({p, node, factor * quad.weights[k]});
    }
  }

  struct TaskValue {
    double value = 0.0;
    double coarse = 0.0;
  };
  std::vector<TaskValue> values = parallel_map<TaskValue>(
      tasks.size(), opts.threads, [&](std::size_t idx) {
        const Task &task = tasks[idx];
        const BoundarySplit split =
            boundary_split(sym, mesh[task.point].chart, task.xi_hat);
        const Psi1Result r = psi1(split, opts.contour);
        return TaskValue{task.weight * r.value, task.weight * r.coarse_value};
      });

  double total = 0.0;
  double total_coarse = 0.0;
  for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
    const double w = mesh[tasks[idx].point].weight;
    result.per_point[tasks[idx].point] += values[idx].value;
    total += w * values[idx].value;
    total_coarse += w * values[idx].coarse;
  }
  result.value = total;
  result.error = std::abs(total - total_coarse);
  if (result.error > 1e-6 * std::max(1.0, std::abs(total))) {
    result.warnings.push_back("A1 contour node-halving delta " +
                              std::to_string(result.error));
  }
  return result;
}

} // namespace heatkern
