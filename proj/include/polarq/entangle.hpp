#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "polarq/error.hpp"

namespace polarq {

/// Two-site density matrix in the basis {|00>, |01>, |10>, |11>}, site i being
/// the left factor.
struct ReducedDensity {
  Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Zero();
  int i = 0;
  int j = 1;
};

namespace detail {

inline int qubit_count_for(Eigen::Index size) {
  int n = 0;
  while ((Eigen::Index{1} << n) < size) ++n;
  require(size >= 1 && (Eigen::Index{1} << n) == size, ErrorCode::size,
          "state length " + std::to_string(size) + " is not a power of two");
  return n;
}

inline void check_pair(int n, int i, int j) {
  require(i != j, ErrorCode::invalid_pair, "pair indices must differ");
  require(i >= 0 && j >= 0 && i < n && j < n, ErrorCode::index_out_of_range,
          "pair (" + std::to_string(i) + ", " + std::to_string(j) + ") outside " +
              std::to_string(n) + " sites");
}

// Two-bit label (a_i a_j) of basis index b.
inline int pair_label(std::uint64_t b, std::uint64_t mi, std::uint64_t mj) {
  return ((b & mi) ? 2 : 0) | ((b & mj) ? 1 : 0);
}

inline std::uint64_t with_label(std::uint64_t b, int label, std::uint64_t mi, std::uint64_t mj) {
  b &= ~(mi | mj);
  if (label & 2) b |= mi;
  if (label & 1) b |= mj;
  return b;
}

}  // namespace detail

/// Partial trace of a pure n-site state down to sites (i, j).
template <typename Derived>
ReducedDensity reduce(const Eigen::MatrixBase<Derived>& state, int i, int j) {
  const int n = detail::qubit_count_for(state.size());
  detail::check_pair(n, i, j);
  const double norm = state.norm();
  detail::require(std::abs(norm - 1.0) <= 1e-9, ErrorCode::normalization,
                  "state norm " + std::to_string(norm) + " differs from 1");
  const std::uint64_t mi = std::uint64_t{1} << (n - 1 - i);
  const std::uint64_t mj = std::uint64_t{1} << (n - 1 - j);
  ReducedDensity rho;
  rho.i = i;
  rho.j = j;
  for (Eigen::Index b = 0; b < state.size(); ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    const std::complex<double> amp = state(b);
    if (amp == 0.0) continue;
    const int row = detail::pair_label(ub, mi, mj);
    for (int col = 0; col < 4; ++col) {
      const auto other = static_cast<Eigen::Index>(detail::with_label(ub, col, mi, mj));
      rho.matrix(row, col) += amp * std::conj(std::complex<double>(state(other)));
    }
  }
  return rho;
}

/// Partial trace of an n-site density matrix down to sites (i, j).
inline ReducedDensity reduce_density(const Eigen::MatrixXcd& density, int i, int j) {
  detail::require(density.rows() == density.cols(), ErrorCode::size,
                  "density matrix must be square");
  const int n = detail::qubit_count_for(density.rows());
  detail::check_pair(n, i, j);
  const std::uint64_t mi = std::uint64_t{1} << (n - 1 - i);
  const std::uint64_t mj = std::uint64_t{1} << (n - 1 - j);
  ReducedDensity rho;
  rho.i = i;
  rho.j = j;
  for (Eigen::Index b = 0; b < density.rows(); ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    const int row = detail::pair_label(ub, mi, mj);
    for (int col = 0; col < 4; ++col) {
      const auto other = static_cast<Eigen::Index>(detail::with_label(ub, col, mi, mj));
      rho.matrix(row, col) += density(b, other);
    }
  }
  const std::complex<double> trace = rho.matrix.trace();
  detail::require(std::abs(trace - 1.0) <= 1e-9, ErrorCode::normalization,
                  "density matrix trace differs from 1");
  return rho;
}

/// (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y).
inline Eigen::Matrix4cd spin_flip(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  return yy * rho.conjugate() * yy;
}

inline Eigen::Matrix4cd spin_flip(const ReducedDensity& rho) { return spin_flip(rho.matrix); }

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), l_k the square roots of the
/// eigenvalues of rho * spin_flip(rho) in decreasing order.
inline double concurrence(const Eigen::Matrix4cd& rho) {
  const Eigen::Matrix4cd product = rho * spin_flip(rho);
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(product, false);
  detail::require(es.info() == Eigen::Success, ErrorCode::numerical_validity,
                  "eigensolver failed on rho * rho~");
  std::array<double, 4> lambda{};
  for (int k = 0; k < 4; ++k) {
    const double re = es.eigenvalues()(k).real();
    detail::require(re >= -1e-8, ErrorCode::numerical_validity,
                    "rho * rho~ has eigenvalue " + std::to_string(re) + " < -1e-8");
    lambda[std::size_t(k)] = std::sqrt(std::max(re, 0.0));
  }
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return std::clamp(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0.0, 1.0);
}

inline double concurrence(const ReducedDensity& rho) { return concurrence(rho.matrix); }

/// Binary entropy with h(0) = h(1) = 0.
inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline double entanglement_of_formation(double c) {
  detail::require(c >= -1e-12 && c <= 1.0 + 1e-12, ErrorCode::domain,
                  "concurrence " + std::to_string(c) + " outside [0, 1]");
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

struct ConcurrenceParameters {
  double x = 0.0;
  double omega = 0.0;
  std::string geometry;
};

class ConcurrenceMap {
 public:
  void set(int i, int j, double value) { entries_[key(i, j)] = value; }

  std::optional<double> get(int i, int j) const {
    auto it = entries_.find(key(i, j));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  double at(int i, int j) const {
    auto v = get(i, j);
    detail::require(v.has_value(), ErrorCode::invalid_pair,
                    "pair (" + std::to_string(i) + ", " + std::to_string(j) + ") not in map");
    return *v;
  }

  const std::map<std::pair<int, int>, double>& entries() const { return entries_; }

  ConcurrenceParameters parameters;

 private:
  static std::pair<int, int> key(int i, int j) { return {std::min(i, j), std::max(i, j)}; }

  std::map<std::pair<int, int>, double> entries_;
};

/// Concurrence for every pair of a pure state, or for the requested pairs only.
template <typename Derived>
ConcurrenceMap pairwise_concurrence_map(const Eigen::MatrixBase<Derived>& ground,
                                        const std::vector<std::pair<int, int>>& pairs = {},
                                        ConcurrenceParameters parameters = {}) {
  const int n = detail::qubit_count_for(ground.size());
  ConcurrenceMap map;
  map.parameters = std::move(parameters);
  auto add = [&](int i, int j) { map.set(i, j, concurrence(reduce(ground, i, j))); };
  if (pairs.empty()) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) add(i, j);
  } else {
    for (const auto& [i, j] : pairs) add(i, j);
  }
  return map;
}

}  // namespace polarq
