#pragma once

// Gate-model primitives: a small gate vocabulary, an exact statevector
// simulator and a line-oriented text format.
//
// Qubit q lives in bit (n - 1 - q) of the basis index, matching the molecule
// ordering of the many-body Hamiltonian.
//
// Text format, one gate per line:
//   GATE q[,q2][,theta]
// e.g. "H 0", "CNOT 0,1", "RZ 2,0.5", "PHASE 1.25" (PHASE is global and takes
// no qubit). Blank lines and lines starting with '#' are ignored, except for
// an optional "# qubits N" header that fixes the register width.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "polarq/error.hpp"

namespace polarq {

enum class GateKind { h, x, z, rz, phase, cnot, cz, swap };

inline std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::h: return "H";
    case GateKind::x: return "X";
    case GateKind::z: return "Z";
    case GateKind::rz: return "RZ";
    case GateKind::phase: return "PHASE";
    case GateKind::cnot: return "CNOT";
    case GateKind::cz: return "CZ";
    case GateKind::swap: return "SWAP";
  }
  return "?";
}

inline int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::phase: return 0;
    case GateKind::cnot:
    case GateKind::cz:
    case GateKind::swap: return 2;
    default: return 1;
  }
}

inline bool gate_has_angle(GateKind k) { return k == GateKind::rz || k == GateKind::phase; }

struct Gate {
  GateKind kind = GateKind::h;
  int q0 = -1;  // single-qubit target, or control for CNOT
  int q1 = -1;  // CNOT target, second qubit of CZ / SWAP
  double theta = 0.0;

  bool operator==(const Gate&) const = default;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n) : n_(n) {
    detail::require(n >= 0, ErrorCode::circuit, "qubit count must be >= 0");
  }

  int n() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

  Circuit& add(const Gate& g) {
    validate(g);
    gates_.push_back(g);
    return *this;
  }

  Circuit& h(int q) { return add({GateKind::h, q}); }
  Circuit& x(int q) { return add({GateKind::x, q}); }
  Circuit& z(int q) { return add({GateKind::z, q}); }
  Circuit& rz(int q, double theta) { return add({GateKind::rz, q, -1, theta}); }
  Circuit& phase(double theta) { return add({GateKind::phase, -1, -1, theta}); }
  Circuit& cnot(int control, int target) { return add({GateKind::cnot, control, target}); }
  Circuit& cz(int a, int b) { return add({GateKind::cz, a, b}); }
  Circuit& swap(int a, int b) { return add({GateKind::swap, a, b}); }

  Circuit& append(const Circuit& other) {
    detail::require(other.n_ == n_, ErrorCode::circuit, "appending circuit of different width");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
  }

  /// True iff every two-qubit gate acts on adjacent indices.
  bool nearest_neighbor() const {
    for (const auto& g : gates_) {
      if (gate_arity(g.kind) == 2 && std::abs(g.q0 - g.q1) != 1) return false;
    }
    return true;
  }

  std::size_t count(GateKind k) const {
    std::size_t c = 0;
    for (const auto& g : gates_) c += (g.kind == k);
    return c;
  }

  std::size_t two_qubit_count() const {
    std::size_t c = 0;
    for (const auto& g : gates_) c += (gate_arity(g.kind) == 2);
    return c;
  }

  bool operator==(const Circuit&) const = default;

 private:
  void validate(const Gate& g) const {
    const int arity = gate_arity(g.kind);
    auto in_range = [this](int q) { return q >= 0 && q < n_; };
    if (arity >= 1) {
      detail::require(in_range(g.q0), ErrorCode::circuit,
                      std::string(gate_name(g.kind)) + ": qubit " + std::to_string(g.q0) +
                          " out of range for " + std::to_string(n_) + " qubits");
    }
    if (arity == 2) {
      detail::require(in_range(g.q1), ErrorCode::circuit,
                      std::string(gate_name(g.kind)) + ": qubit " + std::to_string(g.q1) +
                          " out of range for " + std::to_string(n_) + " qubits");
      detail::require(g.q0 != g.q1, ErrorCode::circuit,
                      std::string(gate_name(g.kind)) + " needs two distinct qubits");
    }
    if (gate_has_angle(g.kind)) {
      detail::require(std::isfinite(g.theta), ErrorCode::circuit, "angle must be finite");
    }
  }

  int n_ = 0;
  std::vector<Gate> gates_;
};

// ---------------------------------------------------------------------------

class StateVector {
 public:
  StateVector() = default;

  explicit StateVector(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
    n_ = 0;
    while ((Eigen::Index{1} << n_) < amps_.size()) ++n_;
    detail::require(amps_.size() >= 1 && (Eigen::Index{1} << n_) == amps_.size(), ErrorCode::size,
                    "amplitude count must be a power of two");
    const double norm = amps_.norm();
    detail::require(std::abs(norm - 1.0) <= 1e-10, ErrorCode::normalization,
                    "state norm " + std::to_string(norm) + " differs from 1");
  }

  static StateVector basis(int n, std::uint64_t index) {
    detail::require(n >= 0 && n <= 30, ErrorCode::capacity, "qubit count out of range");
    detail::require(index < (std::uint64_t{1} << n), ErrorCode::index_out_of_range,
                    "basis index out of range");
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
    a(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(a));
  }

  static StateVector zero(int n) { return basis(n, 0); }

  int n() const { return n_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  std::complex<double> operator[](Eigen::Index b) const { return amps_(b); }

 private:
  friend StateVector simulate(const Circuit&, const StateVector&);

  int n_ = 0;
  Eigen::VectorXcd amps_;
};

namespace detail {

inline void apply_gate(const Gate& g, int n, Eigen::VectorXcd& a) {
  const Eigen::Index dim = a.size();
  const auto mask = [n](int q) { return Eigen::Index{1} << (n - 1 - q); };
  switch (g.kind) {
    case GateKind::h: {
      const Eigen::Index m = mask(g.q0);
      const double s = 1.0 / std::sqrt(2.0);
      for (Eigen::Index b = 0; b < dim; ++b) {
        if (b & m) continue;
        const std::complex<double> u = a(b), v = a(b | m);
        a(b) = s * (u + v);
        a(b | m) = s * (u - v);
      }
      break;
    }
    case GateKind::x: {
      const Eigen::Index m = mask(g.q0);
      for (Eigen::Index b = 0; b < dim; ++b)
        if (!(b & m)) std::swap(a(b), a(b | m));
      break;
    }
    case GateKind::z: {
      const Eigen::Index m = mask(g.q0);
      for (Eigen::Index b = 0; b < dim; ++b)
        if (b & m) a(b) = -a(b);
      break;
    }
    case GateKind::rz: {
      // exp(-i theta Z / 2)
      const Eigen::Index m = mask(g.q0);
      const std::complex<double> lo = std::polar(1.0, -0.5 * g.theta);
      const std::complex<double> hi = std::polar(1.0, 0.5 * g.theta);
      for (Eigen::Index b = 0; b < dim; ++b) a(b) *= (b & m) ? hi : lo;
      break;
    }
    case GateKind::phase:
      a *= std::polar(1.0, g.theta);
      break;
    case GateKind::cnot: {
      const Eigen::Index mc = mask(g.q0), mt = mask(g.q1);
      for (Eigen::Index b = 0; b < dim; ++b)
        if ((b & mc) && !(b & mt)) std::swap(a(b), a(b | mt));
      break;
    }
    case GateKind::cz: {
      const Eigen::Index ma = mask(g.q0), mb = mask(g.q1);
      for (Eigen::Index b = 0; b < dim; ++b)
        if ((b & ma) && (b & mb)) a(b) = -a(b);
      break;
    }
    case GateKind::swap: {
      const Eigen::Index ma = mask(g.q0), mb = mask(g.q1);
      for (Eigen::Index b = 0; b < dim; ++b)
        if ((b & ma) && !(b & mb)) std::swap(a(b), a((b & ~ma) | mb));
      break;
    }
  }
}

}  // namespace detail

inline StateVector simulate(const Circuit& c, const StateVector& in) {
  detail::require(c.n() == in.n(), ErrorCode::circuit,
                  "circuit has " + std::to_string(c.n()) + " qubits, state has " +
                      std::to_string(in.n()));
  StateVector out = in;
  for (const auto& g : c.gates()) detail::apply_gate(g, c.n(), out.amps_);
  return out;
}

/// Dense unitary of a circuit, column b = simulate(|b>). Intended for small n.
inline Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  detail::require(c.n() <= 12, ErrorCode::capacity, "dense unitary limited to 12 qubits");
  const Eigen::Index dim = Eigen::Index{1} << c.n();
  Eigen::MatrixXcd u(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    u.col(b) = simulate(c, StateVector::basis(c.n(), static_cast<std::uint64_t>(b))).amplitudes();
  }
  return u;
}

// ---------------------------------------------------------------------------
// Text serialization

inline std::string format_angle(double theta) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", theta);
  return buf;
}

inline std::string to_text(const Circuit& c) {
  std::string out = "# qubits " + std::to_string(c.n()) + "\n";
  for (const auto& g : c.gates()) {
    out += gate_name(g.kind);
    std::string args;
    const int arity = gate_arity(g.kind);
    if (arity >= 1) args += std::to_string(g.q0);
    if (arity == 2) args += "," + std::to_string(g.q1);
    if (gate_has_angle(g.kind)) args += (args.empty() ? "" : ",") + format_angle(g.theta);
    out += " " + args + "\n";
  }
  return out;
}

inline Circuit parse_circuit(std::string_view text, int n_hint = -1) {
  struct Parsed {
    Gate gate;
    int line;
  };
  std::vector<Parsed> parsed;
  int declared = n_hint;
  int widest = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto bad = [&](const std::string& why) {
    detail::fail(ErrorCode::circuit, "line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream hdr(line.substr(first + 1));
      std::string word;
      int value = 0;
      if (hdr >> word && word == "qubits" && hdr >> value) declared = value;
      continue;
    }
    std::istringstream ls(line.substr(first));
    std::string name, args;
    ls >> name;
    std::getline(ls, args);
    GateKind kind{};
    bool known = false;
    for (GateKind k : {GateKind::h, GateKind::x, GateKind::z, GateKind::rz, GateKind::phase,
                       GateKind::cnot, GateKind::cz, GateKind::swap}) {
      if (name == gate_name(k)) {
        kind = k;
        known = true;
      }
    }
    if (!known) bad("unknown gate '" + name + "'");
    std::vector<std::string> fields;
    std::stringstream fs(args);
    std::string f;
    while (std::getline(fs, f, ',')) {
      const auto b = f.find_first_not_of(" \t\r");
      const auto e = f.find_last_not_of(" \t\r");
      if (b == std::string::npos) bad("empty argument");
      fields.push_back(f.substr(b, e - b + 1));
    }
    const int arity = gate_arity(kind);
    const std::size_t expected = std::size_t(arity) + (gate_has_angle(kind) ? 1 : 0);
    if (fields.size() != expected) {
      bad(name + " expects " + std::to_string(expected) + " argument(s)");
    }
    Gate g{kind};
    try {
      std::size_t used = 0;
      if (arity >= 1) {
        g.q0 = std::stoi(fields[0], &used);
        if (used != fields[0].size()) bad("bad qubit index '" + fields[0] + "'");
      }
      if (arity == 2) {
        g.q1 = std::stoi(fields[1], &used);
        if (used != fields[1].size()) bad("bad qubit index '" + fields[1] + "'");
      }
      if (gate_has_angle(kind)) {
        const auto& s = fields.back();
        g.theta = std::stod(s, &used);
        if (used != s.size()) bad("bad angle '" + s + "'");
      }
    } catch (const std::logic_error&) {
      bad("malformed argument list '" + args + "'");
    }
    widest = std::max({widest, g.q0 + 1, g.q1 + 1});
    parsed.push_back({g, lineno});
  }
  Circuit c(declared >= 0 ? declared : widest);
  for (const auto& p : parsed) {
    lineno = p.line;
    try {
      c.add(p.gate);
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  return c;
}

}  // namespace polarq
