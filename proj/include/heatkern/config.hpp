// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_CONFIG_HPP
#define HEATKERN_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "heatkern/boundary.hpp"
#include "heatkern/interior.hpp"
#include "heatkern/oracle.hpp"
#include "heatkern/symbol.hpp"

namespace heatkern {

struct OracleRun {
  Geometry geometry = Geometry::circle;
  double length = 0.0;
  int m = 0;
  OperatorKind kind = OperatorKind::dbar_d;
  double t_lo = 0.0; // 0 = default window from the grid resolution
  double t_hi = 0.0;
  int t_count = 24;
  int k_max = 3;
};

struct FlowRun {
  RVector x;
  RVector xi;
  int branch = 0;
  double dt = 1e-3;
  int steps = 1000;
};

struct RunConfig {
  DiracSymbol symbol;
  std::vector<RVector> interior_points;
  std::vector<double> interior_weights; // empty: densities only, no A0/A2
  std::vector<BoundaryMeshPoint> boundary_mesh;
  InteriorOptions interior_options;
  A1Options a1_options;
  EllipticitySampleSpec ellipticity;
  std::vector<OracleRun> oracle_runs;
  std::vector<FlowRun> flows;
  double tolerance = 1e-6;
  int threads = 0;
  std::string csv_dir;
};

// Full-schema validation collecting every error (field-path addressed)
// instead of stopping at the first.
struct ConfigParse {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;
};

ConfigParse validate_config(const std::string &json_text);

// Canonical re-emission (sorted keys, normalized shapes); parse(emit(c))
// is semantically identical to c.
std::string emit_config(const RunConfig &config);

// FNV-1a over the canonical emission; stamped into reports.
std::string config_hash(const RunConfig &config);

} // namespace heatkern

#endif
