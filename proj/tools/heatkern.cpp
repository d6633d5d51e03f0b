// SPDX-License-Identifier: Apache-2.0

// Command-line front end: configuration ingestion, orchestration of the
// spectral computations, and report/CSV emission.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "heatkern/finsler.hpp"
#include "heatkern/report.hpp"
#include "heatkern/version.hpp"

namespace {

using namespace heatkern;

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Exit code 2 on any config error, printing the collected list.
RunConfig load_config(const std::string &path) {
  ConfigParse parsed = validate_config(read_file(path));
  if (!parsed.config) {
    std::cerr << "config errors in " << path << ":\n";
    for (const std::string &e : parsed.errors) {
      std::cerr << "  " << e << "\n";
    }
    std::exit(2);
  }
  return std::move(*parsed.config);
}

int cmd_report(const std::string &config_path, const std::string &out_path,
               bool force, double tol, int threads) {
  RunConfig config = load_config(config_path);
  if (tol > 0.0) {
    config.tolerance = tol;
  }
  if (threads > 0) {
    config.threads = threads;
  }
  const ReportOutcome outcome = run_report(config, force);
  if (!outcome.json_text.empty()) {
    if (out_path.empty() || out_path == "-") {
      std::cout << outcome.json_text;
    } else {
      std::ofstream out(out_path);
      out << outcome.json_text;
    }
  }
  if (outcome.exit_code != 0) {
    std::cerr << "report: " << outcome.message << "\n";
  }
  return outcome.exit_code;
}

int cmd_ellipticity(const std::string &config_path) {
  const RunConfig config = load_config(config_path);
  try {
    const EllipticityVerdict verdict =
        ellipticity_check(config.symbol, config.ellipticity);
    std::cout << (verdict.elliptic ? "elliptic" : "NOT elliptic")
              << "  min_eigenvalue=" << verdict.min_eigenvalue << "  witness_x=[";
    for (Eigen::Index i = 0; i < verdict.witness_x.size(); ++i) {
      std::cout << (i ? "," : "") << verdict.witness_x(i);
    }
    std::cout << "]  witness_xi=[";
    for (Eigen::Index i = 0; i < verdict.witness_xi.size(); ++i) {
      std::cout << (i ? "," : "") << verdict.witness_xi(i);
    }
    std::cout << "]\n";
    return verdict.elliptic ? 0 : 3;
  } catch (const Error &e) {
    std::cerr << "ellipticity: " << e.what() << "\n";
    return 1;
  }
}

int cmd_finsler_flow(const std::string &config_path, const std::string &csv_path) {
  const RunConfig config = load_config(config_path);
  try {
    const LeadingSymbol ls = leading_symbol(config.symbol);
    std::ofstream csv;
    std::ostream *out = &std::cout;
    if (!csv_path.empty()) {
      csv.open(csv_path);
      out = &csv;
    }
    *out << "flow,t";
    for (int mu = 0; mu < config.symbol.n; ++mu) {
      *out << ",x" << mu;
    }
    for (int mu = 0; mu < config.symbol.n; ++mu) {
      *out << ",xi" << mu;
    }
    *out << ",h\n";
    *out << std::setprecision(15);
    for (std::size_t f = 0; f < config.flows.size(); ++f) {
      const FlowRun &run = config.flows[f];
      FlowState state{run.x, run.xi, run.branch, 0.0};
      for (int s = 0; s <= run.steps; ++s) {
        const double h =
            eigen_branches(ls, state.x, state.xi).values(run.branch);
        *out << f << "," << state.t;
        for (int mu = 0; mu < config.symbol.n; ++mu) {
          *out << "," << state.x(mu);
        }
        for (int mu = 0; mu < config.symbol.n; ++mu) {
          *out << "," << state.xi(mu);
        }
        *out << "," << h << "\n";
        if (s < run.steps) {
          state = hamiltonian_step(ls, state, run.dt);
        }
      }
    }
    return 0;
  } catch (const Error &e) {
    std::cerr << "finsler-flow: " << e.what() << "\n";
    return 1;
  }
}

int cmd_oracle(const std::string &config_path, const std::string &csv_dir) {
  const RunConfig config = load_config(config_path);
  try {
    for (std::size_t i = 0; i < config.oracle_runs.size(); ++i) {
      const OracleRun &run = config.oracle_runs[i];
      const DiscretizedOperator op = discretize(config.symbol, run.geometry,
                                                run.length, run.m, run.kind);
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
      std::cout << "run " << i << ": A_fit = [";
      for (std::size_t k = 0; k < fit.coeffs.size(); ++k) {
        std::cout << (k ? ", " : "") << fit.coeffs[k];
      }
      std::cout << "]  residual=" << fit.residual << "\n";
      if (!csv_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(csv_dir);
        std::ofstream eig_csv(fs::path(csv_dir) /
                              ("eigenvalues_" + std::to_string(i) + ".csv"));
        eig_csv << "index,eigenvalue\n" << std::setprecision(17);
        for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
          eig_csv << k << "," << spectrum(k) << "\n";
        }
        std::ofstream trace_csv(fs::path(csv_dir) /
                                ("trace_" + std::to_string(i) + ".csv"));
        trace_csv << "t,trace\n" << std::setprecision(17);
        for (Eigen::Index k = 0; k < t_grid.size(); ++k) {
          trace_csv << t_grid(k) << "," << heat_trace(spectrum, t_grid(k))
                    << "\n";
        }
      }
    }
    return 0;
  } catch (const Error &e) {
    std::cerr << "oracle: " << e.what() << "\n";
    return 1;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"heat-kernel spectral invariants of non-Laplace type operators"};
  app.set_version_flag("--version", heatkern::kVersion);
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path, csv_dir;
  bool force = false;
  double tol = 0.0;
  int threads = 0;

  CLI::App *report = app.add_subcommand("report", "full invariant report");
  report->add_option("--config", config_path, "config JSON")->required();
  report->add_option("--out", out_path, "report output path (default stdout)");
  report->add_flag("--force", force, "continue past a failed ellipticity check");
  report->add_option("--tol", tol, "override tolerance");
  report->add_option("--threads", threads, "worker count (overrides env)");

  CLI::App *ell = app.add_subcommand("ellipticity", "ellipticity verdict only");
  ell->add_option("--config", config_path, "config JSON")->required();

  CLI::App *flow = app.add_subcommand("finsler-flow", "bicharacteristic flows");
  flow->add_option("--config", config_path, "config JSON")->required();
  flow->add_option("--out-csv", csv_path, "trajectory CSV path");

  CLI::App *oracle = app.add_subcommand("oracle", "discretization fits");
  oracle->add_option("--config", config_path, "config JSON")->required();
  oracle->add_option("--out-csv-dir", csv_dir, "CSV output directory");

  CLI::App *validate = app.add_subcommand("validate", "config validation only");
  validate->add_option("--config", config_path, "config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) {
      return cmd_report(config_path, out_path, force, tol, threads);
    }
    if (ell->parsed()) {
      return cmd_ellipticity(config_path);
    }
    if (flow->parsed()) {
      return cmd_finsler_flow(config_path, csv_path);
    }
    if (oracle->parsed()) {
      return cmd_oracle(config_path, csv_dir);
    }
    if (validate->parsed()) {
      load_config(config_path);
      std::cout << "config ok\n";
      return 0;
    }
  } catch (const heatkern::ConfigError &e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const heatkern::Error &e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
