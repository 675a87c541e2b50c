#pragma once

// Task execution for the command-line front end. Every task expands its
// configuration into a grid of parameter points, evaluates the points
// (optionally on several threads), and emits CSV rows in grid order.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "polarq/app/config.hpp"
#include "polarq/app/csv.hpp"
#include "polarq/app/parallel.hpp"
#include "polarq/polarq.hpp"

namespace polarq::app {

using Point = std::map<std::string, double>;
using Row = std::vector<std::string>;

struct RunOptions {
  int workers = 0;
  std::optional<std::uint64_t> seed;        // overrides the config seed
  std::filesystem::path base_dir = ".";     // relative paths in the config resolve here
};

struct SideFile {
  std::filesystem::path path;
  std::string content;
};

struct RunResult {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::vector<std::pair<std::string, std::string>> summary;
  std::optional<std::string> failure;
  std::vector<SideFile> side_files;

  std::string csv() const {
    std::string out;
    for (const auto& [k, v] : metadata) out += "# " + k + "=" + v + "\n";
    out += csv_line(columns);
    for (const auto& r : rows) out += csv_line(r);
    if (failure) out += csv_line({"FAILED", *failure});
    for (const auto& [k, v] : summary) out += "# " + k + "=" + v + "\n";
    return out;
  }
};

/// Cartesian product of the axes (first axis outermost) merged with the fixed values.
inline std::vector<Point> expand_grid(const RunConfig& cfg) {
  std::vector<Point> points{cfg.fixed};
  for (const auto& axis : cfg.axes) {
    std::vector<Point> next;
    next.reserve(points.size() * axis.values.size());
    for (const auto& p : points) {
      for (double v : axis.values) {
        Point q = p;
        q[axis.parameter] = v;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

namespace detail {

inline ArrayGeometry make_geometry(const RunConfig& cfg, const Point& p) {
  const GeometrySpec& g = cfg.geometry;
  if (g.kind == "square") return ArrayGeometry::square(g.rows, g.cols);
  if (g.kind == "custom") {
    std::vector<Eigen::Vector3d> pos;
    for (const auto& a : g.positions) pos.emplace_back(a[0], a[1], a[2]);
    return ArrayGeometry::custom(std::move(pos), Eigen::Vector3d(g.field_direction[0],
                                                                 g.field_direction[1],
                                                                 g.field_direction[2]));
  }
  auto it = p.find("n");
  const int n = it != p.end() ? int(it->second) : g.n.value_or(0);
  return ArrayGeometry::linear(n);
}

inline int geometry_size(const RunConfig& cfg, const Point& p) {
  if (cfg.geometry.kind == "square") return cfg.geometry.rows * cfg.geometry.cols;
  if (cfg.geometry.kind == "custom") return int(cfg.geometry.positions.size());
  auto it = p.find("n");
  return it != p.end() ? int(it->second) : cfg.geometry.n.value_or(0);
}

struct Problem {
  QubitPair qp;
  ArrayGeometry geometry;
  QubitHamiltonian hamiltonian;
};

inline Problem make_problem(const RunConfig& cfg, const Point& p) {
  const QubitPair qp = qubit_pair(p.at("x"));
  ArrayGeometry geom = make_geometry(cfg, p);
  const auto couplings = pair_couplings(geom, p.at("omega"),
                                        cfg.nearest_neighbor_only ? CouplingRange::nearest_neighbor
                                                                  : CouplingRange::all_pairs);
  const int n = geom.size();
  return {qp, std::move(geom), QubitHamiltonian(qp, couplings, n)};
}

inline std::vector<double> parse_numbers(const std::string& text, const std::string& origin) {
  std::vector<double> v;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
      std::size_t used = 0;
      double d = 0.0;
      try {
        d = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        throw config_error(origin, "line " + std::to_string(lineno) + ": '" + tok +
                                        "' is not a number");
      }
      v.push_back(d);
    }
  }
  return v;
}

/// Uniform phases in [-pi, pi) from a 64-bit Mersenne Twister.
inline std::vector<double> random_phases(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(std::size_t{1} << n);
  for (double& v : out) {
    const double u = double(rng() >> 11) * 0x1.0p-53;
    v = (2.0 * u - 1.0) * std::numbers::pi;
  }
  return out;
}

inline std::vector<double> load_phases(const RunConfig& cfg, const RunOptions& opt,
                                       std::uint64_t seed) {
  const json& in = cfg.inputs;
  std::vector<double> phases;
  if (in.contains("phases_file")) {
    const auto path = opt.base_dir / in["phases_file"].get<std::string>();
    phases = parse_numbers(read_file(path.string()), "inputs.phases_file");
  } else if (in.contains("phases")) {
    if (!in["phases"].is_array()) throw config_error("inputs.phases", "must be an array");
    for (const auto& v : in["phases"]) {
      if (!v.is_number()) throw config_error("inputs.phases", "must contain numbers only");
      phases.push_back(v.get<double>());
    }
  } else {
    phases = random_phases(in["random_n"].get<int>(), seed);
  }
  if (phases.empty() || !std::has_single_bit(phases.size())) {
    throw config_error("inputs", "phase count " + std::to_string(phases.size()) +
                                      " is not a power of two");
  }
  if (phases.size() > (std::size_t{1} << 12)) {
    throw config_error("inputs", "at most 2^12 phases");
  }
  return phases;
}

inline std::vector<Edge> load_graph(const json& g, int* n_out) {
  const std::string kind = g["kind"].get<std::string>();
  if (kind == "chain") {
    *n_out = g["n"].get<int>();
    return chain_graph(*n_out);
  }
  if (kind == "grid") {
    *n_out = g["rows"].get<int>() * g["cols"].get<int>();
    return grid_graph(g["rows"].get<int>(), g["cols"].get<int>());
  }
  *n_out = g["n"].get<int>();
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < g["edges"].size(); ++k) {
    const json& e = g["edges"][k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw config_error("inputs.graph.edges[" + std::to_string(k) + "]", "must be [a, b]");
    }
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  try {
    polarq::detail::check_graph(edges, *n_out);
  } catch (const Error& e) {
    throw config_error("inputs.graph.edges", e.what());
  }
  return edges;
}

struct Plan {
  std::vector<std::string> columns;
  std::function<std::vector<Row>(const Point&)> evaluate;
  std::function<std::vector<std::pair<std::string, std::string>>(const std::vector<Row>&)> summarize;
  std::vector<SideFile> side_files;
};

inline Row head(const Point& p, std::initializer_list<const char*> keys) {
  Row r;
  for (const char* k : keys) {
    const double v = p.at(k);
    r.push_back(std::string(k) == "n" ? fmt(int(v)) : fmt(v));
  }
  return r;
}

inline Plan plan_task(const RunConfig& cfg, const std::vector<Point>& grid, const RunOptions& opt,
                      std::uint64_t seed) {
  const std::string& t = cfg.task;
  Plan plan;
  const bool linear = cfg.geometry.kind == "linear";

  auto with_n = [&cfg](Point p) {
    if (!p.count("n")) p["n"] = geometry_size(cfg, p);
    return p;
  };

  if (t == "fig3a" || t == "fig3b" || t == "fig3c" || t == "fig3d") {
    plan.columns = {"n", "x", "omega", "p_not_all_zero"};
    if (linear) plan.columns.insert(plan.columns.end(), {"p_fit", "fit_in_window"});
    plan.evaluate = [&cfg, linear, with_n](const Point& p0) {
      const Point p = with_n(p0);
      const Problem pr = make_problem(cfg, p);
      const Spectrum s = spectrum(pr.hamiltonian, EigenRequest::lowest(1));
      Row r = head(p, {"n", "x", "omega"});
      r.push_back(fmt(p_not_all_zero(s.ground_state())));
      if (linear) {
        const FitEstimate f = p_fit(int(p.at("n")), p.at("x"), p.at("omega"));
        r.push_back(fmt(f.value));
        r.push_back(fmt(f.in_window));
      }
      return std::vector<Row>{r};
    };
    return plan;
  }

  if (t == "fig4a" || t == "gap" || t == "sweep") {
    if (t == "fig4a") {
      plan.columns = {"n", "x", "omega", "e0", "e1", "gap", "dw", "gap_minus_dw"};
    } else if (t == "gap") {
      plan.columns = {"n", "x", "omega", "gap", "dw", "relative_deviation"};
    } else {
      plan.columns = {"n",  "x",  "omega", "w0", "w1",  "dw",  "c0",
                      "c1", "xme", "e0",   "e1", "gap", "p_not_all_zero"};
    }
    plan.evaluate = [&cfg, t, with_n](const Point& p0) {
      const Point p = with_n(p0);
      const Problem pr = make_problem(cfg, p);
      const int k = pr.hamiltonian.dim() >= 2 ? 2 : 1;
      const Spectrum s = spectrum(pr.hamiltonian, EigenRequest::lowest(k));
      const double gap = energy_gap(s);
      const double dw = pr.qp.dw;
      Row r = head(p, {"n", "x", "omega"});
      if (t == "fig4a") {
        for (double v : {s.eigenvalues(0), s.eigenvalues(1), gap, dw, gap - dw}) r.push_back(fmt(v));
      } else if (t == "gap") {
        for (double v : {gap, dw, (gap - dw) / dw}) r.push_back(fmt(v));
      } else {
        for (double v : {pr.qp.w0, pr.qp.w1, dw, pr.qp.c0, pr.qp.c1, pr.qp.xme, s.eigenvalues(0),
                         s.eigenvalues(1), gap, p_not_all_zero(s.ground_state())})
          r.push_back(fmt(v));
      }
      return std::vector<Row>{r};
    };
    return plan;
  }

  if (t == "fig4b" || t == "thermal") {
    plan.columns = {"n", "x", "omega", "kt", "p_excited", "log10_p_excited", "underflow"};
    plan.evaluate = [&cfg, with_n](const Point& p0) {
      const Point p = with_n(p0);
      const Problem pr = make_problem(cfg, p);
      const Spectrum s = spectrum(pr.hamiltonian, EigenRequest::all());
      const ThermalExcitation th = thermal_excitation(s, p.at("kt"));
      Row r = head(p, {"n", "x", "omega", "kt"});
      r.push_back(fmt(th.probability));
      r.push_back(fmt(th.log10_probability));
      r.push_back(fmt(th.underflow));
      return std::vector<Row>{r};
    };
    return plan;
  }

  if (t == "fig5a" || t == "fig5b" || t == "fig6a" || t == "fig6b") {
    int n_max = 0;
    for (const auto& p : grid) n_max = std::max(n_max, geometry_size(cfg, p));
    plan.columns = {"n", "x", "omega"};
    for (int k = 2; k <= n_max; ++k) plan.columns.push_back("c_1_" + std::to_string(k));
    plan.evaluate = [&cfg, n_max, with_n](const Point& p0) {
      const Point p = with_n(p0);
      const Problem pr = make_problem(cfg, p);
      const Spectrum s = spectrum(pr.hamiltonian, EigenRequest::lowest(1));
      const Eigen::VectorXd g = s.ground_state();
      Row r = head(p, {"n", "x", "omega"});
      const int n = pr.hamiltonian.n();
      for (int k = 1; k < n_max; ++k) {
        r.push_back(k < n ? fmt(concurrence(reduce(g, 0, k))) : std::string());
      }
      return std::vector<Row>{r};
    };
    return plan;
  }

  if (t == "concurrence") {
    plan.columns = {"n", "x", "omega", "site_i", "site_j", "distance", "concurrence",
                    "entanglement_of_formation"};
    plan.evaluate = [&cfg, with_n](const Point& p0) {
      const Point p = with_n(p0);
      const Problem pr = make_problem(cfg, p);
      const Spectrum s = spectrum(pr.hamiltonian, EigenRequest::lowest(1));
      const ConcurrenceMap map = pairwise_concurrence_map(s.ground_state());
      std::vector<Row> rows;
      for (const auto& [ij, c] : map.entries()) {
        Row r = head(p, {"n", "x", "omega"});
        const double d = (pr.geometry.positions[ij.second] - pr.geometry.positions[ij.first]).norm();
        r.push_back(fmt(ij.first + 1));
        r.push_back(fmt(ij.second + 1));
        r.push_back(fmt(d));
        r.push_back(fmt(c));
        r.push_back(fmt(entanglement_of_formation(c)));
        rows.push_back(std::move(r));
      }
      return rows;
    };
    return plan;
  }

  if (t == "fit-residuals") {
    const bool concurrence_fit = cfg.inputs.value("kind", "impurity") == "concurrence";
    plan.columns = {"n", "x", "omega", "exact", "fit", "relative_error"};
    if (!concurrence_fit) plan.columns.push_back("in_window");
    plan.evaluate = [&cfg, concurrence_fit, with_n](const Point& p0) {
      const Point p = with_n(p0);
      const Problem pr = make_problem(cfg, p);
      const Spectrum s = spectrum(pr.hamiltonian, EigenRequest::lowest(1));
      Row r = head(p, {"n", "x", "omega"});
      double exact = 0.0, fitted = 0.0;
      bool window = true;
      if (concurrence_fit) {
        const int n = pr.hamiltonian.n();
        if (n < 2) throw Error(ErrorCode::invalid_argument, "concurrence fit needs n >= 2");
        exact = concurrence(reduce(s.ground_state(), 0, 1));
        fitted = k_of_x(p.at("x")) * p.at("omega");
      } else {
        exact = p_not_all_zero(s.ground_state());
        const FitEstimate f = p_fit(int(p.at("n")), p.at("x"), p.at("omega"));
        fitted = f.value;
        window = f.in_window;
      }
      const double rel = exact != 0.0 ? (fitted - exact) / exact : 0.0;
      for (double v : {exact, fitted, rel}) r.push_back(fmt(v));
      if (!concurrence_fit) r.push_back(fmt(window));
      return std::vector<Row>{r};
    };
    plan.summarize = [](const std::vector<Row>& rows) {
      std::vector<double> exact, fitted;
      for (const auto& r : rows) {
        exact.push_back(std::stod(r[3]));
        fitted.push_back(std::stod(r[4]));
      }
      std::vector<std::pair<std::string, std::string>> out;
      if (exact.empty()) return out;
      const ResidualReport rep = residual_report(exact, fitted);
      out.emplace_back("max_relative_error", fmt(rep.max_relative));
      out.emplace_back("mean_relative_error", fmt(rep.mean_relative));
      return out;
    };
    return plan;
  }

  if (t == "compile-diagonal") {
    const DiagonalUnitary d(load_phases(cfg, opt, seed));
    plan.columns = {"n",         "eps",       "terms_kept", "terms_dropped", "dropped_weight",
                    "cnot_count", "rz_count", "nearest_neighbor", "max_error"};
    if (cfg.inputs.contains("circuit_output")) {
      const auto base = opt.base_dir / cfg.inputs["circuit_output"].get<std::string>();
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const DiagonalCompilation comp = compile_diagonal_detailed(d, grid[k].at("eps"));
        auto path = base;
        if (grid.size() > 1) path += "." + std::to_string(k);
        plan.side_files.push_back({path, to_text(comp.circuit)});
      }
    }
    plan.evaluate = [d](const Point& p) {
      const DiagonalCompilation comp = compile_diagonal_detailed(d, p.at("eps"));
      const Circuit& c = comp.circuit;
      Row r{fmt(d.n()), fmt(p.at("eps"))};
      r.push_back(fmt(comp.terms_kept));
      r.push_back(fmt(comp.terms_dropped));
      r.push_back(fmt(comp.dropped_weight));
      r.push_back(fmt(c.count(GateKind::cnot)));
      r.push_back(fmt(c.count(GateKind::rz)));
      r.push_back(fmt(c.nearest_neighbor()));
      r.push_back(fmt(diagonal_error(d, c)));
      return std::vector<Row>{r};
    };
    return plan;
  }

  if (t == "iqp") {
    plan.columns = {"n", "t", "probability"};
    if (cfg.inputs.contains("circulant_row")) {
      std::vector<double> row;
      const json& jr = cfg.inputs["circulant_row"];
      if (!jr.is_array()) throw config_error("inputs.circulant_row", "must be an array");
      for (const auto& v : jr) {
        if (!v.is_number()) throw config_error("inputs.circulant_row", "must contain numbers");
        row.push_back(v.get<double>());
      }
      if (row.empty() || !std::has_single_bit(row.size()) || row.size() > (std::size_t{1} << 20)) {
        throw config_error("inputs.circulant_row", "length must be a power of two");
      }
      std::vector<double> lambda;
      try {
        lambda = circulant_spectrum(row);
      } catch (const Error& e) {
        throw config_error("inputs.circulant_row", e.what());
      }
      plan.evaluate = [lambda](const Point& p) {
        const DiagonalUnitary d = circulant_walk_phases(lambda, p.at("t"));
        return std::vector<Row>{{fmt(d.n()), fmt(p.at("t")), fmt(iqp_probability(d))}};
      };
    } else {
      const DiagonalUnitary d(load_phases(cfg, opt, seed));
      plan.evaluate = [d](const Point& p) {
        return std::vector<Row>{{fmt(d.n()), fmt(p.at("t")), fmt(iqp_probability(d))}};
      };
    }
    return plan;
  }

  if (t == "cluster-check") {
    int n = 0;
    const std::vector<Edge> edges = load_graph(cfg.inputs["graph"], &n);
    plan.columns = {"vertex", "degree", "expectation"};
    plan.evaluate = [edges, n](const Point&) {
      const StateVector s = prepare_cluster_state(edges, n);
      const std::vector<double> k = cluster_stabilizer_check(s, edges);
      std::vector<int> degree(std::size_t(n), 0);
      for (const auto& [a, b] : edges) {
        ++degree[std::size_t(a)];
        ++degree[std::size_t(b)];
      }
      std::vector<Row> rows;
      for (int a = 0; a < n; ++a) rows.push_back({fmt(a), fmt(degree[std::size_t(a)]), fmt(k[std::size_t(a)])});
      return rows;
    };
    return plan;
  }

  if (t == "nmr-cnot") {
    const bool angular = cfg.inputs.value("convention", "cyclic") == "angular";
    plan.columns = {"dw_shift",  "wait_scale",        "convention",       "wait_time",
                    "conditional_phase", "deviation", "case1_target_one", "case2_target_zero"};
    plan.evaluate = [angular](const Point& p) {
      const double dw = p.count("dw_shift")
                            ? p.at("dw_shift")
                            : frequency_shift(qubit_pair(p.at("x")), p.at("omega"), p.at("alpha"));
      const NmrCnotReport rep = nmr_cnot_sequence(
          dw, angular ? FrequencyConvention::angular : FrequencyConvention::cyclic,
          p.at("wait_scale"));
      return std::vector<Row>{{fmt(dw), fmt(p.at("wait_scale")), angular ? "angular" : "cyclic",
                               fmt(rep.wait_time), fmt(rep.conditional_phase), fmt(rep.deviation),
                               fmt(rep.case1_target_one), fmt(rep.case2_target_zero)}};
    };
    return plan;
  }

  throw config_error("task", "unknown task '" + t + "'; valid tasks: " + task_names());
}

}  // namespace detail

/// Runs a validated configuration. Config-level problems discovered while
/// loading inputs raise ConfigError; numerical failures are reported through
/// RunResult::failure with the rows completed before the first failing point.
inline RunResult run_task(const RunConfig& cfg, const RunOptions& opt = {}) {
  RunResult result;
  const std::uint64_t seed = opt.seed.value_or(cfg.seed);
  RunConfig recorded = cfg;
  if (opt.seed) {
    recorded.seed = *opt.seed;
    recorded.seed_given = true;
  }
  result.metadata = {{"tool", "polarq"},
                     {"version", kVersion},
                     {"task", cfg.task},
                     {"config", recorded.canonical().dump()}};

  const std::vector<Point> grid = expand_grid(cfg);
  detail::Plan plan = detail::plan_task(cfg, grid, opt, seed);
  result.columns = plan.columns;

  using Outcome = std::variant<std::vector<Row>, std::string>;
  const auto outcomes = parallel_map(grid.size(), opt.workers, [&](std::size_t k) -> Outcome {
    try {
      return plan.evaluate(grid[k]);
    } catch (const std::exception& e) {
      return std::string(e.what());
    }
  });
  for (const auto& o : outcomes) {
    if (const auto* err = std::get_if<std::string>(&o)) {
      result.failure = *err;
      break;
    }
    for (const auto& r : std::get<std::vector<Row>>(o)) result.rows.push_back(r);
  }
  if (!result.failure) {
    if (plan.summarize) result.summary = plan.summarize(result.rows);
    result.side_files = std::move(plan.side_files);
  }
  return result;
}

}  // namespace polarq::app
