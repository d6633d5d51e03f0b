// SPDX-License-Identifier: Apache-2.0

#include "heatkern/config.hpp"

#include <cstdint>
#include <sstream>

#include <json.hpp>

namespace heatkern {

using nlohmann::json;

namespace {

class Collector {
public:
  void add(const std::string &path, const std::string &message) {
    errors_.push_back(path + ": " + message);
  }
  bool ok() const { return errors_.empty(); }
  std::vector<std::string> take() { return std::move(errors_); }

private:
  std::vector<std::string> errors_;
};

std::optional<CMatrix> parse_matrix(const json &node, int fiber,
                                    const std::string &path, Collector &errors) {
  if (!node.is_array() || node.empty()) {
    errors.add(path, "matrix must be a nonempty array of rows");
    return std::nullopt;
  }
  const int rows = static_cast<int>(node.size());
  if (fiber > 0 && rows != fiber) {
    errors.add(path, "matrix row count " + std::to_string(rows) +
                         " does not match fiber dimension " +
                         std::to_string(fiber));
    return std::nullopt;
  }
  CMatrix out(rows, rows);
  for (int i = 0; i < rows; ++i) {
    const json &row = node[i];
    if (!row.is_array() || static_cast<int>(row.size()) != rows) {
      errors.add(path + "[" + std::to_string(i) + "]",
                 "matrix must be square (row length mismatch)");
      return std::nullopt;
    }
    for (int j = 0; j < rows; ++j) {
      const json &entry = row[j];
      if (!entry.is_array() || entry.size() != 2 ||
          !entry[0].is_number() || !entry[1].is_number()) {
        errors.add(path + "[" + std::to_string(i) + "][" + std::to_string(j) +
                       "]",
                   "complex entry must be a [re, im] pair");
        return std::nullopt;
      }
      out(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return out;
}

std::optional<RVector> parse_vector(const json &node, int expected,
                                    const std::string &path, Collector &errors) {
  if (!node.is_array()) {
    errors.add(path, "expected an array of numbers");
    return std::nullopt;
  }
  if (expected >= 0 && static_cast<int>(node.size()) != expected) {
    errors.add(path, "expected length " + std::to_string(expected) + ", got " +
                         std::to_string(node.size()));
    return std::nullopt;
  }
  RVector out(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) {
      errors.add(path + "[" + std::to_string(i) + "]", "expected a number");
      return std::nullopt;
    }
    out(i) = node[i].get<double>();
  }
  return out;
}

std::optional<MatrixField> parse_field(const json &node, int n, int fiber,
                                       const std::string &path,
                                       Collector &errors) {
  if (!node.is_object()) {
    errors.add(path, "field must be an object with a 'kind'");
    return std::nullopt;
  }
  const std::string kind = node.value("kind", "");
  if (kind == "const") {
    auto m = parse_matrix(node.value("matrix", json()), fiber, path + ".matrix",
                          errors);
    if (!m) {
      return std::nullopt;
    }
    return MatrixField::constant(n, *m);
  }
  if (kind == "poly") {
    std::vector<MatrixField::PolyTerm> terms;
    const json &jterms = node.value("terms", json::array());
    for (std::size_t i = 0; i < jterms.size(); ++i) {
      const std::string tpath = path + ".terms[" + std::to_string(i) + "]";
      MatrixField::PolyTerm term;
      const json &jexp = jterms[i].value("exponents", json());
      if (!jexp.is_array() || static_cast<int>(jexp.size()) != n) {
        errors.add(tpath + ".exponents",
                   "expected " + std::to_string(n) + " integer exponents");
        return std::nullopt;
      }
      for (const auto &e : jexp) {
        if (!e.is_number_integer() || e.get<int>() < 0) {
          errors.add(tpath + ".exponents", "exponents must be integers >= 0");
          return std::nullopt;
        }
        term.exponents.push_back(e.get<int>());
      }
      auto m = parse_matrix(jterms[i].value("matrix", json()), fiber,
                            tpath + ".matrix", errors);
      if (!m) {
        return std::nullopt;
      }
      term.coeff = *m;
      terms.push_back(std::move(term));
    }
    return MatrixField::polynomial(n, fiber, std::move(terms));
  }
  if (kind == "trig") {
    if (n != 1) {
      errors.add(path, "trig fields are one-dimensional");
      return std::nullopt;
    }
    const double length = node.value("length", 0.0);
    if (length <= 0.0) {
      errors.add(path + ".length", "period must be positive");
      return std::nullopt;
    }
    std::vector<MatrixField::TrigTerm> terms;
    const json &jterms = node.value("terms", json::array());
    for (std::size_t i = 0; i < jterms.size(); ++i) {
      const std::string tpath = path + ".terms[" + std::to_string(i) + "]";
      MatrixField::TrigTerm term;
      term.harmonic = jterms[i].value("harmonic", 0);
      const std::string phase = jterms[i].value("phase", "cos");
      if (phase != "cos" && phase != "sin") {
        errors.add(tpath + ".phase", "phase must be 'cos' or 'sin'");
        return std::nullopt;
      }
      term.is_sin = phase == "sin";
      auto m = parse_matrix(jterms[i].value("matrix", json()), fiber,
                            tpath + ".matrix", errors);
      if (!m) {
        return std::nullopt;
      }
      term.coeff = *m;
      terms.push_back(std::move(term));
    }
    return MatrixField::trig(length, fiber, std::move(terms));
  }
  errors.add(path + ".kind",
             "unknown field kind '" + kind + "' (const | poly | trig)");
  return std::nullopt;
}

json emit_matrix(const CMatrix &m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(row);
  }
  return rows;
}

json emit_vector(const RVector &v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

} // namespace

ConfigParse validate_config(const std::string &json_text) {
  ConfigParse result;
  Collector errors;

  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error &e) {
    result.errors.push_back(std::string("json: ") + e.what());
    return result;
  }

  const json &op = root.value("operator", json());
  if (!op.is_object()) {
    errors.add("operator", "missing operator section");
    result.errors = errors.take();
    return result;
  }

  const int n = op.value("n", 0);
  const int fiber = op.value("N", 0);
  if (n < 1 || n > 3) {
    errors.add("operator.n", "manifold dimension must be 1..3");
  }
  if (fiber < 1 || fiber > 64) {
    errors.add("operator.N", "fiber dimension must be 1..64");
  }
  if (!errors.ok()) {
    result.errors = errors.take();
    return result;
  }

  auto lo = parse_vector(op.value("domain", json()).value("lo", json()), n,
                         "operator.domain.lo", errors);
  auto hi = parse_vector(op.value("domain", json()).value("hi", json()), n,
                         "operator.domain.hi", errors);

  std::vector<MatrixField> gamma;
  const json &jgamma = op.value("gamma", json());
  if (!jgamma.is_array() || static_cast<int>(jgamma.size()) != n) {
    errors.add("operator.gamma", "expected n = " + std::to_string(n) +
                                     " Dirac matrix fields");
  } else {
    for (int mu = 0; mu < n; ++mu) {
      auto f = parse_field(jgamma[mu], n, fiber,
                           "operator.gamma[" + std::to_string(mu) + "]", errors);
      if (f) {
        gamma.push_back(std::move(*f));
      }
    }
  }

  std::optional<MatrixField> rho;
  if (!op.contains("rho")) {
    errors.add("operator.rho", "missing measure density field");
  } else {
    rho = parse_field(op["rho"], n, fiber, "operator.rho", errors);
  }

  std::vector<MatrixField> connection;
  if (op.contains("connection")) {
    const json &jconn = op["connection"];
    if (!jconn.is_array() || static_cast<int>(jconn.size()) != n) {
      errors.add("operator.connection", "expected n connection fields");
    } else {
      for (int mu = 0; mu < n; ++mu) {
        auto f = parse_field(jconn[mu], n, fiber,
                             "operator.connection[" + std::to_string(mu) + "]",
                             errors);
        if (f) {
          connection.push_back(std::move(*f));
        }
      }
    }
  }

  RunConfig config;

  const json &interior = root.value("interior", json::object());
  const json &jpoints = interior.value("points", json::array());
  for (std::size_t i = 0; i < jpoints.size(); ++i) {
    auto p = parse_vector(jpoints[i], n,
                          "interior.points[" + std::to_string(i) + "]", errors);
    if (p) {
      config.interior_points.push_back(*p);
    }
  }
  const json &jweights = interior.value("weights", json::array());
  for (std::size_t i = 0; i < jweights.size(); ++i) {
    if (!jweights[i].is_number()) {
      errors.add("interior.weights[" + std::to_string(i) + "]",
                 "expected a number");
    } else {
      config.interior_weights.push_back(jweights[i].get<double>());
    }
  }
  if (!config.interior_weights.empty() &&
      config.interior_weights.size() != config.interior_points.size()) {
    errors.add("interior.weights", "weight count must match point count");
  }
  config.interior_options.xi_order = interior.value("xi_order", 16);
  config.interior_options.simplex_order = interior.value("simplex_order", 24);

  const json &boundary = root.value("boundary", json::object());
  const json &jmesh = boundary.value("mesh", json::array());
  for (std::size_t i = 0; i < jmesh.size(); ++i) {
    const std::string mpath = "boundary.mesh[" + std::to_string(i) + "]";
    BoundaryMeshPoint mp;
    auto point = parse_vector(jmesh[i].value("point", json()), n,
                              mpath + ".point", errors);
    auto dr =
        parse_vector(jmesh[i].value("dr", json()), n, mpath + ".dr", errors);
    if (!jmesh[i].contains("weight") || !jmesh[i]["weight"].is_number()) {
      errors.add(mpath + ".weight", "expected a number");
      continue;
    }
    mp.weight = jmesh[i]["weight"].get<double>();
    const json &jdx = jmesh[i].value("dxhat", json::array());
    if (static_cast<int>(jdx.size()) != n - 1) {
      errors.add(mpath + ".dxhat",
                 "expected n-1 = " + std::to_string(n - 1) +
                     " tangential covectors");
      continue;
    }
    bool good = point && dr;
    for (std::size_t j = 0; j < jdx.size(); ++j) {
      auto v = parse_vector(jdx[j], n,
                            mpath + ".dxhat[" + std::to_string(j) + "]", errors);
      if (v) {
        mp.chart.dxhat.push_back(*v);
      } else {
        good = false;
      }
    }
    if (good) {
      mp.chart.point = *point;
      mp.chart.dr = *dr;
      config.boundary_mesh.push_back(std::move(mp));
    }
  }
  config.a1_options.xi_order = boundary.value("xi_order", 16);
  const json &jcontour = boundary.value("contour", json::object());
  config.a1_options.contour.nodes = jcontour.value("nodes", 64);
  config.a1_options.contour.vertex = jcontour.value("vertex", -1.0);
  config.a1_options.contour.slope = jcontour.value("slope", 1.0);
  config.a1_options.contour.halfwidth = jcontour.value("halfwidth", 7.0);
  if (config.a1_options.contour.vertex >= 0.0) {
    errors.add("boundary.contour.vertex",
               "must be negative (left of the spectral cut)");
  }

  const json &jell = root.value("ellipticity", json::object());
  config.ellipticity.grid_per_axis = jell.value("grid_per_axis", 8);
  config.ellipticity.directions = jell.value("directions", 512);
  config.ellipticity.threshold = jell.value("threshold", 1e-8);

  const json &joracle = root.value("oracle", json::array());
  for (std::size_t i = 0; i < joracle.size(); ++i) {
    const std::string opath = "oracle[" + std::to_string(i) + "]";
    OracleRun run;
    const std::string geom = joracle[i].value("geometry", "circle");
    if (geom == "circle") {
      run.geometry = Geometry::circle;
    } else if (geom == "interval") {
      run.geometry = Geometry::interval;
    } else if (geom == "halfline") {
      run.geometry = Geometry::halfline;
    } else {
      errors.add(opath + ".geometry",
                 "unknown geometry (circle | interval | halfline)");
      continue;
    }
    const std::string kind = joracle[i].value("kind", "dbar_d");
    if (kind == "laplacian") {
      run.kind = OperatorKind::laplacian;
    } else if (kind == "dbar_d") {
      run.kind = OperatorKind::dbar_d;
    } else if (kind == "d_dbar") {
      run.kind = OperatorKind::d_dbar;
    } else {
      errors.add(opath + ".kind",
                 "unknown kind (laplacian | dbar_d | d_dbar)");
      continue;
    }
    run.length = joracle[i].value("length", 0.0);
    run.m = joracle[i].value("m", 0);
    if (run.length <= 0.0) {
      errors.add(opath + ".length", "must be positive");
    }
    if (run.m < 16) {
      errors.add(opath + ".m", "must be at least 16");
    }
    if (joracle[i].contains("t_window")) {
      const json &w = joracle[i]["t_window"];
      if (!w.is_array() || w.size() != 2 || !w[0].is_number() ||
          !w[1].is_number()) {
        errors.add(opath + ".t_window", "expected [t_lo, t_hi]");
      } else {
        run.t_lo = w[0].get<double>();
        run.t_hi = w[1].get<double>();
      }
    }
    run.t_count = joracle[i].value("t_count", 24);
    run.k_max = joracle[i].value("k_max", 3);
    config.oracle_runs.push_back(run);
  }

  const json &jflows = root.value("finsler", json::array());
  for (std::size_t i = 0; i < jflows.size(); ++i) {
    const std::string fpath = "finsler[" + std::to_string(i) + "]";
    FlowRun run;
    auto x = parse_vector(jflows[i].value("x", json()), n, fpath + ".x", errors);
    auto xi =
        parse_vector(jflows[i].value("xi", json()), n, fpath + ".xi", errors);
    run.branch = jflows[i].value("branch", 0);
    run.dt = jflows[i].value("dt", 1e-3);
    run.steps = jflows[i].value("steps", 1000);
    if (run.branch < 0 || run.branch >= fiber) {
      errors.add(fpath + ".branch", "branch index out of range");
    }
    if (x && xi) {
      run.x = *x;
      run.xi = *xi;
      config.flows.push_back(run);
    }
  }

  config.tolerance = root.value("tolerance", 1e-6);
  config.threads = root.value("threads", 0);
  config.csv_dir = root.value("output", json::object()).value("csv_dir", "");

  if (!errors.ok()) {
    result.errors = errors.take();
    return result;
  }

  try {
    config.symbol = make_dirac_symbol(n, fiber, std::move(gamma),
                                      std::move(*rho), std::move(connection),
                                      std::move(*lo), std::move(*hi));
  } catch (const Error &e) {
    result.errors.push_back(std::string("operator: ") + e.what());
    return result;
  }

  result.config = std::move(config);
  return result;
}

namespace {

json emit_field(const MatrixField &field) {
  json out;
  switch (field.kind()) {
  case MatrixField::Kind::constant_value:
    out["kind"] = "const";
    out["matrix"] = emit_matrix(field.constant_value());
    break;
  case MatrixField::Kind::polynomial_table: {
    out["kind"] = "poly";
    json terms = json::array();
    for (const auto &term : field.poly_terms()) {
      terms.push_back(
          {{"exponents", term.exponents}, {"matrix", emit_matrix(term.coeff)}});
    }
    out["terms"] = terms;
    break;
  }
  case MatrixField::Kind::trig_table: {
    out["kind"] = "trig";
    out["length"] = field.trig_length();
    json terms = json::array();
    for (const auto &term : field.trig_terms()) {
      terms.push_back({{"harmonic", term.harmonic},
                       {"phase", term.is_sin ? "sin" : "cos"},
                       {"matrix", emit_matrix(term.coeff)}});
    }
    out["terms"] = terms;
    break;
  }
  case MatrixField::Kind::callable_rule:
    throw ConfigError("emit_config: callable fields have no serial form");
  }
  return out;
}

json skeleton(const RunConfig &config) {
  json out;
  out["operator"]["n"] = config.symbol.n;
  out["operator"]["N"] = config.symbol.N;
  out["operator"]["domain"]["lo"] = emit_vector(config.symbol.box_lo);
  out["operator"]["domain"]["hi"] = emit_vector(config.symbol.box_hi);
  json gammas = json::array();
  json conns = json::array();
  for (int mu = 0; mu < config.symbol.n; ++mu) {
    gammas.push_back(emit_field(config.symbol.gamma[mu]));
    conns.push_back(emit_field(config.symbol.connection[mu]));
  }
  out["operator"]["gamma"] = gammas;
  out["operator"]["connection"] = conns;
  out["operator"]["rho"] = emit_field(config.symbol.rho);

  json points = json::array();
  for (const RVector &p : config.interior_points) {
    points.push_back(emit_vector(p));
  }
  out["interior"]["points"] = points;
  out["interior"]["weights"] = config.interior_weights;
  out["interior"]["xi_order"] = config.interior_options.xi_order;
  out["interior"]["simplex_order"] = config.interior_options.simplex_order;

  json mesh = json::array();
  for (const BoundaryMeshPoint &mp : config.boundary_mesh) {
    json entry;
    entry["point"] = emit_vector(mp.chart.point);
    entry["weight"] = mp.weight;
    entry["dr"] = emit_vector(mp.chart.dr);
    json dx = json::array();
    for (const RVector &v : mp.chart.dxhat) {
      dx.push_back(emit_vector(v));
    }
    entry["dxhat"] = dx;
    mesh.push_back(entry);
  }
  out["boundary"]["mesh"] = mesh;
  out["boundary"]["xi_order"] = config.a1_options.xi_order;
  out["boundary"]["contour"] = {{"nodes", config.a1_options.contour.nodes},
                                {"vertex", config.a1_options.contour.vertex},
                                {"slope", config.a1_options.contour.slope},
                                {"halfwidth", config.a1_options.contour.halfwidth}};

  json oracle = json::array();
  for (const OracleRun &run : config.oracle_runs) {
    json entry;
    entry["geometry"] = run.geometry == Geometry::circle     ? "circle"
                        : run.geometry == Geometry::interval ? "interval"
                                                             : "halfline";
    entry["kind"] = run.kind == OperatorKind::laplacian ? "laplacian"
                    : run.kind == OperatorKind::dbar_d  ? "dbar_d"
                                                        : "d_dbar";
    entry["length"] = run.length;
    entry["m"] = run.m;
    entry["t_window"] = {run.t_lo, run.t_hi};
    entry["t_count"] = run.t_count;
    entry["k_max"] = run.k_max;
    oracle.push_back(entry);
  }
  out["oracle"] = oracle;

  json flows = json::array();
  for (const FlowRun &run : config.flows) {
    json entry;
    entry["x"] = emit_vector(run.x);
    entry["xi"] = emit_vector(run.xi);
    entry["branch"] = run.branch;
    entry["dt"] = run.dt;
    entry["steps"] = run.steps;
    flows.push_back(entry);
  }
  out["finsler"] = flows;

  out["ellipticity"] = {{"grid_per_axis", config.ellipticity.grid_per_axis},
                        {"directions", config.ellipticity.directions},
                        {"threshold", config.ellipticity.threshold}};
  out["tolerance"] = config.tolerance;
  out["threads"] = config.threads;
  out["output"]["csv_dir"] = config.csv_dir;
  return out;
}

} // namespace

std::string emit_config(const RunConfig &config) {
  return skeleton(config).dump(2);
}

std::string config_hash(const RunConfig &config) {
  const std::string canon = skeleton(config).dump();
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : canon) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  std::ostringstream out;
  out << "fnv1a64-" << std::hex << hash;
  return out.str();
}

} // namespace heatkern
