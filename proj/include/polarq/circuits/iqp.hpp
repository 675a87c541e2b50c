#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "polarq/circuits/diagonal.hpp"

namespace polarq {

/// p = |<0...0| H^n D H^n |0...0>|^2 = |2^-n sum_b e^{i theta_b}|^2.
inline double iqp_probability(const DiagonalUnitary& d) {
  detail::require(d.n() <= 24, ErrorCode::capacity, "IQP probability limited to 24 qubits");
  std::complex<double> mean = 0.0;
  for (double theta : d.phases()) mean += std::polar(1.0, theta);
  mean /= double(d.dim());
  return std::norm(mean);
}

/// D = exp(-i Lambda t) for a circulant walk with spectrum Lambda.
inline DiagonalUnitary circulant_walk_phases(std::span<const double> eigenvalues, double t) {
  detail::require(!eigenvalues.empty() && std::has_single_bit(eigenvalues.size()),
                  ErrorCode::size, "circulant spectrum length must be a power of two");
  std::vector<double> phases;
  phases.reserve(eigenvalues.size());
  for (double lambda : eigenvalues) phases.push_back(-lambda * t);
  return DiagonalUnitary(std::move(phases));
}

/// Eigenvalues lambda_k = sum_j row_j cos(2 pi j k / N) of a symmetric circulant
/// adjacency matrix given by its first row.
inline std::vector<double> circulant_spectrum(std::span<const double> first_row) {
  const std::size_t size = first_row.size();
  detail::require(size >= 1, ErrorCode::size, "empty circulant row");
  for (std::size_t j = 1; j < size; ++j) {
    detail::require(std::abs(first_row[j] - first_row[size - j]) <= 1e-12,
                    ErrorCode::invalid_argument, "circulant row is not symmetric");
  }
  std::vector<double> lambda(size, 0.0);
  for (std::size_t k = 0; k < size; ++k) {
    for (std::size_t j = 0; j < size; ++j) {
      // Reduce j*k mod N first so large N keeps the cosine argument small.
      const double arg = 2.0 * std::numbers::pi * double((j * k) % size) / double(size);
      lambda[k] += first_row[j] * std::cos(arg);
    }
  }
  return lambda;
}

}  // namespace polarq
