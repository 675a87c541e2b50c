#pragma once

// Run configuration for the command-line front end.
//
// A config is a JSON object:
//   {
//     "task": "fig3a",
//     "geometry": {"kind": "linear", "n": 6} | {"kind": "square", "rows": 3, "cols": 3}
//                 | {"kind": "custom", "positions": [[x, y, z], ...], "field_direction": [0, 0, 1]},
//     "nearest_neighbor_only": false,
//     "sweep": [{"parameter": "omega", "from": 1e-5, "to": 1e-3, "points": 9, "scale": "log"},
//               {"parameter": "n", "values": [4, 6, 8]}],
//     "fixed": {"x": 2.0},
//     "inputs": {...task specific...},
//     "output": "out.csv",
//     "workers": 0,
//     "seed": 1
//   }
// Parameters not given by the config fall back to the task defaults.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace polarq::app {

using nlohmann::json;

struct Violation {
  std::string field;
  std::string message;

  std::string str() const { return field + ": " + message; }
};

/// Raised when a config cannot be read or parsed; carries every violation.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Violation> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<Violation>& v) {
    std::string out;
    for (const auto& x : v) out += (out.empty() ? "" : "; ") + x.str();
    return out;
  }
  std::vector<Violation> violations_;
};

inline ConfigError config_error(std::string field, std::string message) {
  return ConfigError(std::vector<Violation>{{std::move(field), std::move(message)}});
}

struct Axis {
  std::string parameter;
  std::vector<double> values;
};

inline std::vector<double> linear_range(double from, double to, int points) {
  std::vector<double> v;
  if (points == 1) return {from};
  for (int k = 0; k < points; ++k) v.push_back(from + (to - from) * k / double(points - 1));
  return v;
}

inline std::vector<double> log_range(double from, double to, int points) {
  std::vector<double> v;
  if (points == 1) return {from};
  const double lf = std::log10(from), lt = std::log10(to);
  for (int k = 0; k < points; ++k) v.push_back(std::pow(10.0, lf + (lt - lf) * k / double(points - 1)));
  return v;
}

inline std::vector<double> integer_range(int from, int to) {
  std::vector<double> v;
  for (int k = from; k <= to; ++k) v.push_back(k);
  return v;
}

// ---------------------------------------------------------------------------
// Task catalog

enum class GeometryUse { none, linear, square };

struct TaskInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> params;
  std::vector<Axis> default_axes;
  std::map<std::string, double> default_fixed;
  GeometryUse geometry = GeometryUse::none;
};

inline const std::vector<TaskInfo>& task_catalog() {
  static const std::vector<TaskInfo> catalog = [] {
    const auto omega_log = log_range(1e-5, 1e-2, 13);
    const auto x_lin = linear_range(0.25, 8.0, 32);
    std::vector<TaskInfo> t;
    t.push_back({"fig3a", "ground-state impurity vs coupling", {"n", "x", "omega"},
                 {{"n", {2, 4, 6, 8}}, {"x", {2, 3, 4.9}}, {"omega", omega_log}}, {},
                 GeometryUse::linear});
    t.push_back({"fig3b", "ground-state impurity vs molecule count", {"n", "x", "omega"},
                 {{"x", {2, 3, 4.9, 8}}, {"n", integer_range(2, 9)}}, {{"omega", 1e-5}},
                 GeometryUse::linear});
    t.push_back({"fig3c", "ground-state impurity vs field", {"n", "x", "omega"},
                 {{"omega", {1e-2, 1e-3, 1e-4}}, {"n", integer_range(2, 8)}, {"x", x_lin}}, {},
                 GeometryUse::linear});
    t.push_back({"fig3d", "ground-state impurity of a square lattice", {"x", "omega"},
                 {{"x", {2, 3, 4.9, 8}}, {"omega", omega_log}}, {}, GeometryUse::square});
    t.push_back({"fig4a", "energy gap vs coupling", {"n", "x", "omega"},
                 {{"n", integer_range(2, 9)}, {"omega", linear_range(0.0, 0.04, 9)}}, {{"x", 2.0}},
                 GeometryUse::linear});
    t.push_back({"fig4b", "thermal excitation vs temperature", {"n", "x", "omega", "kt"},
                 {{"kt", {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0}}},
                 {{"n", 8}, {"x", 2.0}, {"omega", 1e-4}}, GeometryUse::linear});
    t.push_back({"fig5a", "pairwise concurrence vs coupling, linear array", {"n", "x", "omega"},
                 {{"omega", omega_log}}, {{"n", 9}, {"x", 2.0}}, GeometryUse::linear});
    t.push_back({"fig5b", "pairwise concurrence vs field, linear array", {"n", "x", "omega"},
                 {{"x", x_lin}}, {{"n", 9}, {"omega", 1e-3}}, GeometryUse::linear});
    t.push_back({"fig6a", "pairwise concurrence vs coupling, square lattice", {"x", "omega"},
                 {{"omega", omega_log}}, {{"x", 2.0}}, GeometryUse::square});
    t.push_back({"fig6b", "pairwise concurrence vs field, square lattice", {"x", "omega"},
                 {{"x", x_lin}}, {{"omega", 1e-3}}, GeometryUse::square});
    t.push_back({"sweep", "spectrum summary over any grid", {"n", "x", "omega"}, {},
                 {{"n", 4}, {"x", 2.0}, {"omega", 1e-3}}, GeometryUse::linear});
    t.push_back({"concurrence", "ground-state concurrence for every pair", {"n", "x", "omega"}, {},
                 {{"n", 9}, {"x", 2.0}, {"omega", 1e-3}}, GeometryUse::linear});
    t.push_back({"thermal", "thermal excitation probability", {"n", "x", "omega", "kt"}, {},
                 {{"n", 8}, {"x", 2.0}, {"omega", 1e-4}, {"kt", 0.002}}, GeometryUse::linear});
    t.push_back({"gap", "energy gap against the single-molecule splitting", {"n", "x", "omega"}, {},
                 {{"n", 4}, {"x", 2.0}, {"omega", 1e-4}}, GeometryUse::linear});
    t.push_back({"compile-diagonal", "nearest-neighbour circuit for a diagonal unitary", {"eps"},
                 {}, {{"eps", 1e-3}}, GeometryUse::none});
    t.push_back({"iqp", "IQP all-zero output probability", {"t"}, {}, {{"t", 0.0}},
                 GeometryUse::none});
    t.push_back({"cluster-check", "cluster-state stabilizer expectations", {}, {}, {},
                 GeometryUse::none});
    t.push_back({"fit-residuals", "empirical fits against exact diagonalization",
                 {"n", "x", "omega"}, {}, {}, GeometryUse::linear});
    t.push_back({"nmr-cnot", "pulse-sequence CNOT check",
                 {"dw_shift", "wait_scale", "x", "omega", "alpha"}, {},
                 {{"wait_scale", 1.0}, {"x", 2.0}, {"omega", 1e-4}, {"alpha", std::numbers::pi / 2}},
                 GeometryUse::none});
    return t;
  }();
  return catalog;
}

inline const TaskInfo* find_task(const std::string& name) {
  for (const auto& t : task_catalog())
    if (t.name == name) return &t;
  return nullptr;
}

inline std::string task_names() {
  std::string s;
  for (const auto& t : task_catalog()) s += (s.empty() ? "" : ", ") + t.name;
  return s;
}

// ---------------------------------------------------------------------------
// Parsed config

struct GeometrySpec {
  std::string kind = "linear";  // linear | square | custom
  std::optional<int> n;
  int rows = 3;
  int cols = 3;
  std::vector<std::array<double, 3>> positions;
  std::array<double, 3> field_direction{0.0, 0.0, 1.0};
};

struct RunConfig {
  std::string task;
  GeometrySpec geometry;
  bool nearest_neighbor_only = false;
  std::vector<Axis> axes;               // effective grid axes, in order
  std::map<std::string, double> fixed;  // effective scalar parameters
  json inputs = json::object();
  std::string output;
  int workers = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 0;
  bool seed_given = false;

  /// Normalized record of every input that affects results.
  json canonical() const {
    json j;
    j["task"] = task;
    if (find_task(task) && find_task(task)->geometry != GeometryUse::none) {
      json g;
      g["kind"] = geometry.kind;
      if (geometry.kind == "linear" && geometry.n) g["n"] = *geometry.n;
      if (geometry.kind == "square") {
        g["rows"] = geometry.rows;
        g["cols"] = geometry.cols;
      }
      if (geometry.kind == "custom") {
        g["positions"] = geometry.positions;
        g["field_direction"] = geometry.field_direction;
      }
      j["geometry"] = g;
      j["nearest_neighbor_only"] = nearest_neighbor_only;
    }
    json a = json::array();
    for (const auto& axis : axes) a.push_back({{"parameter", axis.parameter}, {"values", axis.values}});
    j["sweep"] = a;
    j["fixed"] = fixed;
    j["inputs"] = inputs;
    if (seed_given) j["seed"] = seed;
    return j;
  }
};

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline const std::set<std::string>& known_parameters() {
  static const std::set<std::string> p{"n", "x", "omega", "kt", "eps", "t", "dw_shift",
                                       "wait_scale", "alpha"};
  return p;
}

inline std::optional<std::string> check_value(const std::string& param, double v) {
  if (!std::isfinite(v)) return "must be finite";
  if (param == "n") {
    if (v != std::floor(v)) return "must be an integer";
    if (v < 1 || v > 14) return "must be in [1, 14]";
  } else if (param == "x") {
    if (v < 0) return "must be >= 0";
  } else if (param == "omega") {
    if (v < 0) return "must be >= 0";
  } else if (param == "kt") {
    if (v < 0) return "must be >= 0";
  } else if (param == "eps" || param == "dw_shift") {
    if (v <= 0) return "must be > 0";
  } else if (param == "wait_scale") {
    if (v < 0) return "must be >= 0";
  }
  return std::nullopt;
}

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k < text.size() && k + 1 < byte; ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class Checker {
 public:
  std::vector<Violation> violations;

  void add(std::string field, std::string message) {
    violations.push_back({std::move(field), std::move(message)});
  }

  bool number(const json& j, const std::string& field) {
    if (!j.is_number()) {
      add(field, "must be a number");
      return false;
    }
    return true;
  }

  bool integer(const json& j, const std::string& field) {
    if (!j.is_number_integer() && !(j.is_number() && j.get<double>() == std::floor(j.get<double>()))) {
      add(field, "must be an integer");
      return false;
    }
    return true;
  }
};

}  // namespace detail

/// Collects every schema violation of a parsed config document.
inline std::vector<Violation> validate_config(const json& doc) {
  detail::Checker ck;
  if (!doc.is_object()) {
    ck.add("<root>", "config must be a JSON object");
    return ck.violations;
  }
  static const std::set<std::string> top{"task",   "geometry", "nearest_neighbor_only", "sweep",
                                         "fixed",  "inputs",   "output",                "workers",
                                         "seed",   "comment"};
  for (const auto& [key, _] : doc.items()) {
    if (!top.count(key)) ck.add(key, "unknown field");
  }

  const TaskInfo* task = nullptr;
  if (!doc.contains("task")) {
    ck.add("task", "required; valid tasks: " + task_names());
  } else if (!doc["task"].is_string()) {
    ck.add("task", "must be a single task name; valid tasks: " + task_names());
  } else {
    task = find_task(doc["task"].get<std::string>());
    if (!task) {
      ck.add("task", "unknown task '" + doc["task"].get<std::string>() +
                         "'; valid tasks: " + task_names());
    }
  }

  std::set<std::string> seen_params;
  auto check_param_name = [&](const std::string& field, const std::string& p) {
    if (!detail::known_parameters().count(p)) {
      ck.add(field, "unknown parameter '" + p + "'");
      return false;
    }
    if (task && std::find(task->params.begin(), task->params.end(), p) == task->params.end()) {
      ck.add(field, "parameter '" + p + "' is not used by task " + task->name);
      return false;
    }
    if (!seen_params.insert(p).second) {
      ck.add(field, "parameter '" + p + "' given more than once");
      return false;
    }
    return true;
  };

  if (doc.contains("sweep")) {
    const json& sweep = doc["sweep"];
    if (!sweep.is_array()) {
      ck.add("sweep", "must be an array of axes");
    } else {
      for (std::size_t k = 0; k < sweep.size(); ++k) {
        const std::string f = "sweep[" + std::to_string(k) + "]";
        const json& ax = sweep[k];
        if (!ax.is_object()) {
          ck.add(f, "must be an object");
          continue;
        }
        for (const auto& [key, _] : ax.items()) {
          static const std::set<std::string> allowed{"parameter", "from", "to", "points", "scale",
                                                     "values"};
          if (!allowed.count(key)) ck.add(f + "." + key, "unknown field");
        }
        if (!ax.contains("parameter") || !ax["parameter"].is_string()) {
          ck.add(f + ".parameter", "required string");
          continue;
        }
        const std::string p = ax["parameter"].get<std::string>();
        if (!check_param_name(f + ".parameter", p)) continue;
        if (ax.contains("values")) {
          if (!ax["values"].is_array() || ax["values"].empty()) {
            ck.add(f + ".values", "must be a non-empty array of numbers");
            continue;
          }
          for (std::size_t v = 0; v < ax["values"].size(); ++v) {
            const std::string vf = f + ".values[" + std::to_string(v) + "]";
            if (!ck.number(ax["values"][v], vf)) continue;
            if (auto why = detail::check_value(p, ax["values"][v].get<double>())) ck.add(vf, *why);
          }
          continue;
        }
        bool ok = true;
        for (const char* key : {"from", "to"}) {
          if (!ax.contains(key)) {
            ck.add(f + "." + key, "required (or give 'values')");
            ok = false;
          } else if (!ck.number(ax[key], f + "." + key)) {
            ok = false;
          } else if (auto why = detail::check_value(p, ax[key].get<double>())) {
            ck.add(f + "." + key, *why);
            ok = false;
          }
        }
        int points = 1;
        if (!ax.contains("points")) {
          ck.add(f + ".points", "required");
          ok = false;
        } else if (!ck.integer(ax["points"], f + ".points")) {
          ok = false;
        } else if ((points = ax["points"].get<int>()) < 1) {
          ck.add(f + ".points", "must be >= 1");
          ok = false;
        }
        std::string scale = "linear";
        if (ax.contains("scale")) {
          if (!ax["scale"].is_string() ||
              (ax["scale"] != "linear" && ax["scale"] != "log")) {
            ck.add(f + ".scale", "must be 'linear' or 'log'");
            ok = false;
          } else {
            scale = ax["scale"].get<std::string>();
          }
        }
        if (!ok) continue;
        const double from = ax["from"].get<double>(), to = ax["to"].get<double>();
        if (from > to) ck.add(f, "sweep bounds must satisfy from <= to");
        if (scale == "log" && from <= 0) ck.add(f + ".from", "log scale needs from > 0");
        if (p == "n" && points > 1 &&
            (to - from) / (points - 1) != std::floor((to - from) / (points - 1))) {
          ck.add(f + ".points", "integer parameter n needs an integer step");
        }
      }
    }
  }

  if (doc.contains("fixed")) {
    const json& fixed = doc["fixed"];
    if (!fixed.is_object()) {
      ck.add("fixed", "must be an object of numbers");
    } else {
      for (const auto& [key, value] : fixed.items()) {
        const std::string f = "fixed." + key;
        if (!check_param_name(f, key)) continue;
        if (!ck.number(value, f)) continue;
        if (auto why = detail::check_value(key, value.get<double>())) ck.add(f, *why);
      }
    }
  }

  if (doc.contains("geometry")) {
    const json& g = doc["geometry"];
    if (task && task->geometry == GeometryUse::none) {
      ck.add("geometry", "task " + task->name + " does not use a geometry");
    } else if (!g.is_object() || !g.contains("kind") || !g["kind"].is_string()) {
      ck.add("geometry.kind", "required: linear, square or custom");
    } else {
      const std::string kind = g["kind"].get<std::string>();
      if (kind == "linear") {
        if (g.contains("n")) {
          if (ck.integer(g["n"], "geometry.n")) {
            if (auto why = detail::check_value("n", g["n"].get<double>())) ck.add("geometry.n", *why);
          }
          if (seen_params.count("n")) ck.add("geometry.n", "n is also given as a parameter");
        }
      } else if (kind == "square") {
        for (const char* key : {"rows", "cols"}) {
          if (!g.contains(key)) continue;
          const std::string f = std::string("geometry.") + key;
          if (ck.integer(g[key], f) && g[key].get<int>() < 1) ck.add(f, "must be >= 1");
        }
        const int rows = g.value("rows", 3), cols = g.value("cols", 3);
        if (rows >= 1 && cols >= 1 && rows * cols > 14) ck.add("geometry", "at most 14 sites");
        if (seen_params.count("n")) ck.add("geometry", "square geometry fixes n; drop parameter n");
      } else if (kind == "custom") {
        if (!g.contains("positions") || !g["positions"].is_array() || g["positions"].empty()) {
          ck.add("geometry.positions", "required non-empty array of [x, y, z]");
        } else {
          if (g["positions"].size() > 14) ck.add("geometry.positions", "at most 14 sites");
          for (std::size_t k = 0; k < g["positions"].size(); ++k) {
            const json& p = g["positions"][k];
            if (!p.is_array() || p.size() != 3 ||
                !std::all_of(p.begin(), p.end(), [](const json& v) { return v.is_number(); })) {
              ck.add("geometry.positions[" + std::to_string(k) + "]", "must be [x, y, z]");
            }
          }
        }
        if (g.contains("field_direction")) {
          const json& fd = g["field_direction"];
          if (!fd.is_array() || fd.size() != 3 ||
              !std::all_of(fd.begin(), fd.end(), [](const json& v) { return v.is_number(); })) {
            ck.add("geometry.field_direction", "must be [x, y, z]");
          }
        }
        if (seen_params.count("n")) ck.add("geometry", "custom geometry fixes n; drop parameter n");
      } else {
        ck.add("geometry.kind", "must be linear, square or custom");
      }
    }
  }

  if (doc.contains("nearest_neighbor_only") && !doc["nearest_neighbor_only"].is_boolean()) {
    ck.add("nearest_neighbor_only", "must be true or false");
  }
  if (doc.contains("output") && !doc["output"].is_string()) ck.add("output", "must be a string");
  if (doc.contains("workers")) {
    if (ck.integer(doc["workers"], "workers") && doc["workers"].get<int>() < 0) {
      ck.add("workers", "must be >= 0");
    }
  }
  if (doc.contains("seed") && !doc["seed"].is_number_unsigned()) {
    ck.add("seed", "must be a non-negative integer");
  }

  // Task-specific inputs.
  json inputs = doc.contains("inputs") ? doc["inputs"] : json::object();
  if (!inputs.is_object()) {
    ck.add("inputs", "must be an object");
    inputs = json::object();
  }
  if (task) {
    auto string_input = [&](const char* key) {
      if (inputs.contains(key) && !inputs[key].is_string()) {
        ck.add(std::string("inputs.") + key, "must be a string");
      }
    };
    std::set<std::string> allowed;
    if (task->name == "compile-diagonal") {
      allowed = {"phases_file", "phases", "random_n", "circuit_output"};
      string_input("phases_file");
      string_input("circuit_output");
      const int sources = int(inputs.contains("phases_file")) + int(inputs.contains("phases")) +
                          int(inputs.contains("random_n"));
      if (sources != 1) ck.add("inputs", "give exactly one of phases_file, phases, random_n");
      if (inputs.contains("random_n") &&
          (!inputs["random_n"].is_number_integer() || inputs["random_n"].get<int>() < 1 ||
           inputs["random_n"].get<int>() > 12)) {
        ck.add("inputs.random_n", "must be an integer in [1, 12]");
      }
    } else if (task->name == "iqp") {
      allowed = {"phases_file", "phases", "circulant_row"};
      string_input("phases_file");
      const int sources = int(inputs.contains("phases_file")) + int(inputs.contains("phases")) +
                          int(inputs.contains("circulant_row"));
      if (sources != 1) ck.add("inputs", "give exactly one of phases_file, phases, circulant_row");
    } else if (task->name == "cluster-check") {
      allowed = {"graph"};
      if (!inputs.contains("graph") || !inputs["graph"].is_object()) {
        ck.add("inputs.graph", "required: {\"kind\": \"chain\"|\"grid\"|\"edges\", ...}");
      } else {
        const json& g = inputs["graph"];
        const std::string kind = g.value("kind", "");
        if (kind == "chain") {
          if (!g.contains("n") || !g["n"].is_number_integer() || g["n"].get<int>() < 1 ||
              g["n"].get<int>() > 16)
            ck.add("inputs.graph.n", "must be an integer in [1, 16]");
        } else if (kind == "grid") {
          const int r = g.value("rows", 0), c = g.value("cols", 0);
          if (r < 1 || c < 1 || r * c > 16) ck.add("inputs.graph", "grid needs rows, cols >= 1 and at most 16 vertices");
        } else if (kind == "edges") {
          if (!g.contains("n") || !g["n"].is_number_integer() || g["n"].get<int>() < 1 ||
              g["n"].get<int>() > 16)
            ck.add("inputs.graph.n", "must be an integer in [1, 16]");
          if (!g.contains("edges") || !g["edges"].is_array()) ck.add("inputs.graph.edges", "required array of [a, b]");
        } else {
          ck.add("inputs.graph.kind", "must be chain, grid or edges");
        }
      }
    } else if (task->name == "fit-residuals") {
      allowed = {"kind"};
      if (inputs.contains("kind") &&
          (!inputs["kind"].is_string() ||
           (inputs["kind"] != "impurity" && inputs["kind"] != "concurrence"))) {
        ck.add("inputs.kind", "must be 'impurity' or 'concurrence'");
      }
    } else if (task->name == "nmr-cnot") {
      allowed = {"convention"};
      if (inputs.contains("convention") &&
          (!inputs["convention"].is_string() ||
           (inputs["convention"] != "cyclic" && inputs["convention"] != "angular"))) {
        ck.add("inputs.convention", "must be 'cyclic' or 'angular'");
      }
    }
    for (const auto& [key, _] : inputs.items()) {
      if (!allowed.count(key)) ck.add("inputs." + key, "not used by task " + task->name);
    }
    const bool needs_n = task->geometry == GeometryUse::linear &&
                         std::find(task->params.begin(), task->params.end(), "n") != task->params.end();
    const bool geometry_fixes_n =
        doc.contains("geometry") && doc["geometry"].is_object() &&
        (doc["geometry"].value("kind", "") != "linear" || doc["geometry"].contains("n"));
    const bool has_default_n =
        task->default_fixed.count("n") ||
        std::any_of(task->default_axes.begin(), task->default_axes.end(),
                    [](const Axis& a) { return a.parameter == "n"; }) ||
        task->name == "fit-residuals";
    if (needs_n && !seen_params.count("n") && !geometry_fixes_n && !has_default_n) {
      ck.add("n", "required for a linear geometry");
    }
  }
  return ck.violations;
}

/// Parses JSON text, reporting syntax errors with line and column.
inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte);
    throw config_error("<json>", "line " + std::to_string(line) + ", column " +
                                      std::to_string(col) + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("<file>", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Builds the effective configuration; throws ConfigError on any violation.
inline RunConfig parse_config(const json& doc) {
  if (auto v = validate_config(doc); !v.empty()) throw ConfigError(std::move(v));
  RunConfig cfg;
  cfg.task = doc["task"].get<std::string>();
  const TaskInfo& task = *find_task(cfg.task);
  cfg.inputs = doc.value("inputs", json::object());
  cfg.output = doc.value("output", std::string());
  cfg.workers = doc.value("workers", 0);
  if (doc.contains("seed")) {
    cfg.seed = doc["seed"].get<std::uint64_t>();
    cfg.seed_given = true;
  }
  cfg.nearest_neighbor_only = doc.value("nearest_neighbor_only", false);

  if (task.geometry == GeometryUse::square) cfg.geometry.kind = "square";
  if (doc.contains("geometry")) {
    const json& g = doc["geometry"];
    cfg.geometry.kind = g["kind"].get<std::string>();
    if (g.contains("n")) cfg.geometry.n = g["n"].get<int>();
    cfg.geometry.rows = g.value("rows", 3);
    cfg.geometry.cols = g.value("cols", 3);
    if (g.contains("positions")) {
      for (const auto& p : g["positions"]) {
        cfg.geometry.positions.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
      }
    }
    if (g.contains("field_direction")) {
      const json& f = g["field_direction"];
      cfg.geometry.field_direction = {f[0].get<double>(), f[1].get<double>(), f[2].get<double>()};
    }
  }

  std::set<std::string> given;
  if (doc.contains("sweep")) {
    for (const auto& ax : doc["sweep"]) {
      Axis a;
      a.parameter = ax["parameter"].get<std::string>();
      if (ax.contains("values")) {
        for (const auto& v : ax["values"]) a.values.push_back(v.get<double>());
      } else {
        const double from = ax["from"].get<double>(), to = ax["to"].get<double>();
        const int points = ax["points"].get<int>();
        a.values = ax.value("scale", "linear") == "log" ? log_range(from, to, points)
                                                        : linear_range(from, to, points);
        if (a.parameter == "n") {
          for (double& v : a.values) v = std::round(v);
        }
      }
      given.insert(a.parameter);
      cfg.axes.push_back(std::move(a));
    }
  }
  if (doc.contains("fixed")) {
    for (const auto& [key, value] : doc["fixed"].items()) {
      cfg.fixed[key] = value.get<double>();
      given.insert(key);
    }
  }
  const bool geometry_fixes_n = cfg.geometry.kind != "linear" || cfg.geometry.n.has_value();

  std::vector<Axis> default_axes = task.default_axes;
  std::map<std::string, double> default_fixed = task.default_fixed;
  if (task.name == "fit-residuals") {
    if (cfg.inputs.value("kind", "impurity") == "concurrence") {
      default_axes = {{"x", {1, 2, 4}}};
      default_fixed = {{"n", 2}, {"omega", 1e-3}};
    } else {
      default_axes = {{"n", integer_range(4, 8)}, {"x", {2, 3, 4.9}}, {"omega", {1e-4, 1e-3}}};
    }
  }
  for (const auto& a : default_axes) {
    if (given.count(a.parameter) || (a.parameter == "n" && geometry_fixes_n)) continue;
    cfg.axes.push_back(a);
    given.insert(a.parameter);
  }
  for (const auto& [key, value] : default_fixed) {
    if (given.count(key) || (key == "n" && geometry_fixes_n)) continue;
    cfg.fixed[key] = value;
  }
  return cfg;
}

}  // namespace polarq::app
