#pragma once

// Nearest-neighbour synthesis of diagonal unitaries D = diag(exp(i theta_b)).
//
// The phase profile is expanded over parity functions,
//   theta_b = sum_s a_s (-1)^{popcount(s & b)},
// the smallest coefficients are dropped while their total magnitude stays
// within the error budget eps (so max_b |e^{i theta_b} - e^{i theta'_b}| <= eps),
// and each kept term becomes a CNOT ladder onto the qubit of the most
// significant set bit of s, one RZ, and the mirrored ladder. Long-range CNOTs
// are expanded into nearest-neighbour CNOTs with SWAP conjugation.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "polarq/circuits/circuit.hpp"

namespace polarq {

class DiagonalUnitary {
 public:
  DiagonalUnitary() = default;

  explicit DiagonalUnitary(std::vector<double> phases) : phases_(std::move(phases)) {
    n_ = 0;
    while ((std::size_t{1} << n_) < phases_.size()) ++n_;
    detail::require(!phases_.empty() && (std::size_t{1} << n_) == phases_.size(), ErrorCode::size,
                    "phase count " + std::to_string(phases_.size()) + " is not a power of two");
    for (double p : phases_) {
      detail::require(std::isfinite(p), ErrorCode::invalid_argument, "phases must be finite");
    }
  }

  static DiagonalUnitary identity(int n) {
    return DiagonalUnitary(std::vector<double>(std::size_t{1} << n, 0.0));
  }

  int n() const { return n_; }
  std::size_t dim() const { return phases_.size(); }
  const std::vector<double>& phases() const { return phases_; }
  double operator[](std::size_t b) const { return phases_[b]; }

  /// Every phase wrapped into (-pi, pi].
  DiagonalUnitary canonical() const {
    std::vector<double> out(phases_);
    for (double& p : out) {
      p = std::remainder(p, 2.0 * std::numbers::pi);
      if (p <= -std::numbers::pi) p += 2.0 * std::numbers::pi;
    }
    return DiagonalUnitary(std::move(out));
  }

  /// Product D * other (phases add).
  DiagonalUnitary operator*(const DiagonalUnitary& other) const {
    detail::require(other.dim() == dim(), ErrorCode::size, "diagonal size mismatch");
    std::vector<double> out(phases_);
    for (std::size_t b = 0; b < out.size(); ++b) out[b] += other.phases_[b];
    return DiagonalUnitary(std::move(out));
  }

 private:
  int n_ = 0;
  std::vector<double> phases_;
};

/// Coefficients a_s of theta_b = sum_s a_s (-1)^{s.b} (fast Walsh-Hadamard transform).
inline std::vector<double> walsh_coefficients(std::span<const double> phases) {
  std::vector<double> a(phases.begin(), phases.end());
  const std::size_t dim = a.size();
  detail::require(dim >= 1 && std::has_single_bit(dim), ErrorCode::size,
                  "phase count must be a power of two");
  for (std::size_t h = 1; h < dim; h <<= 1) {
    for (std::size_t b = 0; b < dim; b += 2 * h) {
      for (std::size_t k = b; k < b + h; ++k) {
        const double u = a[k], v = a[k + h];
        a[k] = u + v;
        a[k + h] = u - v;
      }
    }
  }
  for (double& v : a) v /= double(dim);
  return a;
}

/// Nearest-neighbour CNOT(control, target) for a linear register of n qubits.
/// Uses CNOT_AC = SWAP_AB CNOT_BC SWAP_AB with SWAP_AB = CNOT_AB CNOT_BA CNOT_AB,
/// i.e. 6(m - 1) + 1 CNOTs for distance m.
inline Circuit long_range_cnot(int control, int target, int n) {
  Circuit c(n);
  detail::require(control != target, ErrorCode::circuit, "control and target coincide");
  detail::require(control >= 0 && target >= 0 && control < n && target < n, ErrorCode::circuit,
                  "CNOT qubits out of range");
  const int step = target > control ? 1 : -1;
  std::vector<int> hops;  // positions the control is swapped through
  int a = control;
  while (std::abs(target - a) > 1) {
    hops.push_back(a);
    a += step;
  }
  auto swap_nn = [&c](int p, int q) { c.cnot(p, q).cnot(q, p).cnot(p, q); };
  for (int p : hops) swap_nn(p, p + step);
  c.cnot(a, target);
  for (auto it = hops.rbegin(); it != hops.rend(); ++it) swap_nn(*it, *it + step);
  return c;
}

struct DiagonalCompilation {
  Circuit circuit;
  std::size_t terms_kept = 0;
  std::size_t terms_dropped = 0;
  double dropped_weight = 0.0;  // sum of |a_s| removed; bounds the phase error
  double global_phase = 0.0;    // a_0
};

inline DiagonalCompilation compile_diagonal_detailed(const DiagonalUnitary& d, double eps) {
  detail::require(eps > 0.0, ErrorCode::invalid_argument, "error budget eps must be > 0");
  const int n = d.n();
  const std::vector<double> a = walsh_coefficients(d.phases());

  std::vector<std::size_t> order;
  for (std::size_t s = 1; s < a.size(); ++s) order.push_back(s);
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t l, std::size_t r) { return std::abs(a[l]) < std::abs(a[r]); });
  std::vector<bool> keep(a.size(), true);
  DiagonalCompilation out;
  for (std::size_t s : order) {
    if (out.dropped_weight + std::abs(a[s]) > eps) break;
    out.dropped_weight += std::abs(a[s]);
    keep[s] = false;
    ++out.terms_dropped;
  }

  out.circuit = Circuit(n);
  out.global_phase = a[0];
  if (a[0] != 0.0) out.circuit.phase(a[0]);
  for (std::size_t s = 1; s < a.size(); ++s) {
    if (!keep[s]) continue;
    ++out.terms_kept;
    const int msb = std::bit_width(s) - 1;
    const int target = n - 1 - msb;
    std::vector<int> controls;
    for (int bit = msb - 1; bit >= 0; --bit) {
      if (s & (std::size_t{1} << bit)) controls.push_back(n - 1 - bit);
    }
    for (int c : controls) out.circuit.append(long_range_cnot(c, target, n));
    out.circuit.rz(target, -2.0 * a[s]);
    for (auto it = controls.rbegin(); it != controls.rend(); ++it) {
      out.circuit.append(long_range_cnot(*it, target, n));
    }
  }
  return out;
}

inline Circuit compile_diagonal(const DiagonalUnitary& d, double eps) {
  return compile_diagonal_detailed(d, eps).circuit;
}

/// max_b || C|b> - e^{i theta_b}|b> ||, by simulating every basis state.
inline double diagonal_error(const DiagonalUnitary& d, const Circuit& c) {
  detail::require(c.n() == d.n(), ErrorCode::circuit, "circuit and diagonal widths differ");
  detail::require(d.n() <= 16, ErrorCode::capacity, "basis-state check limited to 16 qubits");
  double worst = 0.0;
  for (std::size_t b = 0; b < d.dim(); ++b) {
    Eigen::VectorXcd out = simulate(c, StateVector::basis(d.n(), b)).amplitudes();
    out(static_cast<Eigen::Index>(b)) -= std::polar(1.0, d[b]);
    worst = std::max(worst, out.norm());
  }
  return worst;
}

}  // namespace polarq
