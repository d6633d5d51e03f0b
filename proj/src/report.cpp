// SPDX-License-Identifier: Apache-2.0

#include "heatkern/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "heatkern/algebra.hpp"
#include "heatkern/finsler.hpp"
#include "heatkern/version.hpp"

namespace heatkern {

using nlohmann::json;

namespace {

json value_with_error(double value, double error) {
  return json{{"value", value}, {"error", error}};
}

json exact_value(double value) {
  return json{{"value", value}, {"exact", true}};
}

json vector_json(const RVector &v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

void write_oracle_csv(const std::string &dir, std::size_t run_index,
                      const RVector &spectrum, const RVector &t_grid) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) /
                      ("eigenvalues_" + std::to_string(run_index) + ".csv"));
    out << "index,eigenvalue\n";
    for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
      out << k << "," << std::setprecision(17) << spectrum(k) << "\n";
    }
  }
  {
    std::ofstream out(fs::path(dir) /
                      ("trace_" + std::to_string(run_index) + ".csv"));
    out << "t,trace\n";
    for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
      out << std::setprecision(17) << t_grid(i) << ","
          << heat_trace(spectrum, t_grid(i)) << "\n";
    }
  }
}

} // namespace

ReportOutcome run_report(const RunConfig &config, bool force) {
  ReportOutcome outcome;
  json report;
  report["tool"] = {{"name", "heatkern"}, {"version", kVersion}};
  report["provenance"] = {{"config_hash", config_hash(config)}};
  json warnings = json::array();

  const DiracSymbol &sym = config.symbol;

  // Gate: interior ellipticity.
  EllipticityVerdict verdict;
  try {
    verdict = ellipticity_check(sym, config.ellipticity);
  } catch (const Error &e) {
    outcome.exit_code = 1;
    outcome.message = std::string("ellipticity check failed to run: ") + e.what();
    return outcome;
  }
  report["ellipticity"] = {{"elliptic", verdict.elliptic},
                           {"min_eigenvalue", verdict.min_eigenvalue},
                           {"witness_x", vector_json(verdict.witness_x)},
                           {"witness_xi", vector_json(verdict.witness_xi)}};
  if (!verdict.elliptic && !force) {
    report["aborted"] = "symbol is not elliptic (use force to override)";
    outcome.json_text = report.dump(2) + "\n";
    outcome.exit_code = 3;
    outcome.message = "ellipticity abort";
    return outcome;
  }
  if (!verdict.elliptic) {
    warnings.push_back("forced past a failed ellipticity check");
  }

  try {
    InteriorOptions iopts = config.interior_options;
    iopts.threads = config.threads;
    iopts.tolerance = config.tolerance;

    // Interior densities per point.
    json interior_points = json::array();
    double a0_total = 0.0, a0_err = 0.0;
    double a2_total = 0.0, a2_err = 0.0;
    double a1_worst = 0.0;
    for (std::size_t i = 0; i < config.interior_points.size(); ++i) {
      const RVector &x = config.interior_points[i];
      const DensityResult a0 = compute_a0(sym, x, iopts);
      const double a1_res = check_a1(sym, x, iopts);
      const JetData jets = jets_at(sym, x);
      const DensityResult a2 = compute_a2(sym, x, jets, iopts);
      a1_worst = std::max(a1_worst, a1_res);
      json entry;
      entry["x"] = vector_json(x);
      entry["a0"] = value_with_error(a0.value, a0.error);
      entry["a1_residual"] = a1_res;
      entry["a2"] = value_with_error(a2.value, a2.error);
      for (const std::string &w : a0.warnings) {
        warnings.push_back(w);
      }
      for (const std::string &w : a2.warnings) {
        warnings.push_back(w);
      }
      interior_points.push_back(entry);
      if (!config.interior_weights.empty()) {
        a0_total += config.interior_weights[i] * a0.value;
        a0_err += config.interior_weights[i] * a0.error;
        a2_total += config.interior_weights[i] * a2.value;
        a2_err += config.interior_weights[i] * a2.error;
      }
    }
    report["interior"]["points"] = interior_points;
    if (!config.interior_weights.empty()) {
      report["interior"]["A0"] = value_with_error(a0_total, a0_err);
      report["interior"]["A2"] = value_with_error(a2_total, a2_err);
    }
    report["interior"]["a1_residual_max"] = a1_worst;

    // Boundary invariant.
    json cross_checks;
    if (!config.boundary_mesh.empty()) {
      A1Options aopts = config.a1_options;
      aopts.threads = config.threads;
      const A1Result a1 = compute_A1(sym, config.boundary_mesh, aopts);
      report["boundary"]["A1"] = value_with_error(a1.value, a1.error);
      report["boundary"]["per_point_density"] = a1.per_point;
      for (const std::string &w : a1.warnings) {
        warnings.push_back(w);
      }

      // Cross-checks at the first mesh point.
      const BoundaryChart &chart = config.boundary_mesh.front().chart;
      RVector xi_hat(sym.n - 1);
      xi_hat.setConstant(sym.n > 1 ? 1.0 : 0.0);
      const BoundarySplit split = boundary_split(sym, chart, xi_hat);
      const Complex probe_lambda(-1.0, 0.0);
      const ResolventSlice res = phi0(split, probe_lambda, Phi0Method::residue);
      const ResolventSlice quad =
          phi0(split, probe_lambda, Phi0Method::quadrature);
      cross_checks["phi0_residue_vs_quadrature"] =
          max_abs(res.phi0 - quad.phi0);
      const double b_norm = max_abs(split.B);
      if (b_norm <= 1e-12 * std::max(1.0, max_abs(split.A) * max_abs(split.C))) {
        const Psi1Result contour = psi1(split, aopts.contour);
        const CMatrix c2 = split.C * split.C;
        const double closed =
            -0.5 * std::sqrt(M_PI) * matrix_exp(-c2).trace().real();
        cross_checks["psi1_contour_vs_closed_form"] =
            std::abs(contour.value - closed);
      }

      // Independent discretization check of the contour integral: the
      // boundary part of the truncated half-line trace at t = 1.
      {
        const double radius = std::min(halfline_radius(split), 12.0);
        const DiscretizedOperator frozen =
            discretize_frozen_halfline(split, radius, 600);
        const RVector spectrum = dense_spectrum(frozen);
        const double oracle_value =
            halfline_boundary_term(spectrum, split, radius, 1.0);
        const Psi1Result contour = psi1(split, aopts.contour);
        cross_checks["psi1_contour_vs_halfline_oracle"] =
            std::abs(contour.value - oracle_value);
      }
    }

    // Finsler branch summaries and flows.
    json finsler = json::array();
    const LeadingSymbol ls = leading_symbol(sym);
    for (const FlowRun &run : config.flows) {
      json entry;
      entry["x"] = vector_json(run.x);
      entry["xi"] = vector_json(run.xi);
      entry["branch"] = run.branch;
      const EigenBranches branches = eigen_branches(ls, run.x, run.xi);
      entry["h_branches"] = vector_json(branches.values);
      json degenerate = json::array();
      for (bool d : branches.degenerate) {
        degenerate.push_back(d);
      }
      entry["degenerate"] = degenerate;
      FlowState state{run.x, run.xi, run.branch, 0.0};
      const double h_start = branches.values(run.branch);
      for (int s = 0; s < run.steps; ++s) {
        state = hamiltonian_step(ls, state, run.dt);
      }
      const double h_end =
          eigen_branches(ls, state.x, state.xi).values(run.branch);
      entry["h_drift_relative"] =
          std::abs(h_end - h_start) / std::max(1e-300, std::abs(h_start));
      entry["t_end"] = state.t;
      entry["x_end"] = vector_json(state.x);
      entry["xi_end"] = vector_json(state.xi);
      finsler.push_back(entry);
    }
    report["finsler"] = finsler;

    // Oracle runs.
    json oracle = json::array();
    for (std::size_t i = 0; i < config.oracle_runs.size(); ++i) {
      const OracleRun &run = config.oracle_runs[i];
      const DiscretizedOperator op =
          discretize(sym, run.geometry, run.length, run.m, run.kind);
      const RVector spectrum = dense_spectrum(op);
      const double h = run.length / run.m;
      const double t_lo = run.t_lo > 0.0 ? run.t_lo : 300.0 * h * h;
      // Circles wrap: winding images e^{-(mL)^2/4t} force a lower top.
      const double t_hi = run.t_hi > 0.0
                              ? run.t_hi
                              : (run.geometry == Geometry::circle ? 0.02 : 0.1) *
                                    run.length * run.length;
      const RVector t_grid = heat_time_grid(t_lo, t_hi, run.t_count);
      const HeatFit fit =
          fit_heat_invariants(spectrum, 1, t_grid, run.k_max,
                              run.geometry == Geometry::circle);
      json entry;
      entry["geometry"] = run.geometry == Geometry::circle     ? "circle"
                          : run.geometry == Geometry::interval ? "interval"
                                                               : "halfline";
      entry["m"] = run.m;
      entry["length"] = run.length;
      entry["A_fit"] = fit.coeffs;
      entry["A_uncertainty"] = fit.uncertainty;
      entry["fit_residual"] = fit.residual;
      entry["fit_condition"] = fit.condition;
      for (const std::string &w : fit.warnings) {
        warnings.push_back(w);
      }
      oracle.push_back(entry);
      if (!config.csv_dir.empty()) {
        write_oracle_csv(config.csv_dir, i, spectrum, t_grid);
      }

      // Interior/oracle consistency: Weyl coefficient vs integrated a0.
      if (run.geometry == Geometry::circle && !config.interior_points.empty()) {
        const DensityResult a0 =
            compute_a0(sym, config.interior_points.front(), iopts);
        cross_checks["oracle_A0_vs_a0_density"] =
            std::abs(fit.coeffs[0] / run.length - a0.value);
      }
    }
    report["oracle"] = oracle;

    // Index identity on the first circle oracle geometry, if any.
    for (const OracleRun &run : config.oracle_runs) {
      if (run.geometry == Geometry::circle) {
        const IndexCheck idx = index_check(sym, run.length, std::min(run.m, 128));
        json entry;
        entry["paired_spectra_residual"] = idx.paired_residual;
        entry["index"] = idx.index;
        entry["trace_diff_spread"] = idx.trace_diff_spread;
        report["index"] = entry;
        for (const std::string &f : idx.flags) {
          warnings.push_back(f);
        }
        break;
      }
    }

    report["cross_checks"] = cross_checks;
  } catch (const Error &e) {
    outcome.exit_code = 1;
    outcome.message = e.what();
    report["failure"] = e.what();
    outcome.json_text = report.dump(2) + "\n";
    return outcome;
  }

  report["warnings"] = warnings;
  outcome.json_text = report.dump(2) + "\n";
  return outcome;
}

} // namespace heatkern
