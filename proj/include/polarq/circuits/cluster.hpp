#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "polarq/circuits/circuit.hpp"

namespace polarq {

using Edge = std::pair<int, int>;

namespace detail {

inline void check_graph(const std::vector<Edge>& edges, int n) {
  std::set<Edge> seen;
  for (const auto& [a, b] : edges) {
    require(a != b, ErrorCode::graph, "self-loop on vertex " + std::to_string(a));
    require(a >= 0 && b >= 0 && a < n && b < n, ErrorCode::graph,
            "edge (" + std::to_string(a) + ", " + std::to_string(b) + ") outside " +
                std::to_string(n) + " vertices");
    require(seen.insert({std::min(a, b), std::max(a, b)}).second, ErrorCode::graph,
            "duplicate edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
  }
}

}  // namespace detail

/// H on every qubit followed by CZ on every edge.
inline Circuit cluster_circuit(const std::vector<Edge>& edges, int n) {
  detail::check_graph(edges, n);
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.h(q);
  for (const auto& [a, b] : edges) c.cz(a, b);
  return c;
}

inline StateVector prepare_cluster_state(const std::vector<Edge>& edges, int n) {
  return simulate(cluster_circuit(edges, n), StateVector::zero(n));
}

/// <K_a> for K_a = X_a prod_{b in N(a)} Z_b, one entry per vertex.
inline std::vector<double> cluster_stabilizer_check(const StateVector& state,
                                                    const std::vector<Edge>& edges) {
  const int n = state.n();
  detail::check_graph(edges, n);
  std::vector<std::uint64_t> neighbours(std::size_t(n), 0);
  const auto mask = [n](int q) { return std::uint64_t{1} << (n - 1 - q); };
  for (const auto& [a, b] : edges) {
    neighbours[std::size_t(a)] |= mask(b);
    neighbours[std::size_t(b)] |= mask(a);
  }
  std::vector<double> out;
  out.reserve(std::size_t(n));
  const auto& amps = state.amplitudes();
  for (int a = 0; a < n; ++a) {
    std::complex<double> acc = 0.0;
    const std::uint64_t zmask = neighbours[std::size_t(a)];
    for (Eigen::Index b = 0; b < amps.size(); ++b) {
      const auto ub = static_cast<std::uint64_t>(b);
      const double sign = (std::popcount(ub & zmask) & 1) ? -1.0 : 1.0;
      acc += std::conj(amps(static_cast<Eigen::Index>(ub ^ mask(a)))) * sign * amps(b);
    }
    out.push_back(acc.real());
  }
  return out;
}

/// Edges of a path 0-1-...-(n-1).
inline std::vector<Edge> chain_graph(int n) {
  std::vector<Edge> e;
  for (int q = 0; q + 1 < n; ++q) e.emplace_back(q, q + 1);
  return e;
}

/// Edges of a row-major rows x cols grid.
inline std::vector<Edge> grid_graph(int rows, int cols) {
  std::vector<Edge> e;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      if (c + 1 < cols) e.emplace_back(v, v + 1);
      if (r + 1 < rows) e.emplace_back(v, v + cols);
    }
  }
  return e;
}

}  // namespace polarq
