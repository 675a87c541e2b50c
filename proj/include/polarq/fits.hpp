#pragma once

// Empirical fits for ground-state impurity and nearest-neighbour concurrence:
//
//   P ~ (N - 2) f(x) (1e4 Omega/B)^2
//   f(x) = y0 + A s1(x) (1 - s2(x)),   s_k(x) = 1 / (1 + exp(-(x - xc)/dx_k))
//   C_ij = K(x) Omega_ij / B,   K(x) = A1 + A2 / (1 + exp((x - x0)/dx))

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "polarq/error.hpp"

namespace polarq {

struct FitParamsF {
  double y0 = 3.25724e-11;
  double a = 8.89294e-10;
  double xc = 0.78549;
  double dx1 = 0.28914;
  double dx2 = 1.50288;
};

struct FitParamsK {
  double a1 = 0.01092;
  double a2 = 0.2195;
  double x0 = 0.9658;
  double dx = 0.9743;
};

inline double f_of_x(double x, const FitParamsF& p = {}) {
  const double s1 = 1.0 / (1.0 + std::exp(-(x - p.xc) / p.dx1));
  const double s2 = 1.0 / (1.0 + std::exp(-(x - p.xc) / p.dx2));
  return p.y0 + p.a * s1 * (1.0 - s2);
}

struct FitEstimate {
  double value = 0.0;
  bool in_window = true;  // false outside n > 3, 0 < x <= 8, 0 <= omega <= 1e-2
};

inline FitEstimate p_fit(int n, double x, double omega, const FitParamsF& p = {}) {
  FitEstimate out;
  const double scaled = 1e4 * omega;
  out.value = (n - 2) * f_of_x(x, p) * scaled * scaled;
  out.in_window = n > 3 && x > 0.0 && x <= 8.0 && omega >= 0.0 && omega <= 1e-2;
  return out;
}

inline double k_of_x(double x, const FitParamsK& p = {}) {
  return p.a1 + p.a2 / (1.0 + std::exp((x - p.x0) / p.dx));
}

struct ResidualReport {
  std::vector<double> relative;  // |fitted - exact| / |exact| per grid point
  double max_relative = 0.0;
  double mean_relative = 0.0;
};

inline ResidualReport residual_report(std::span<const double> exact, std::span<const double> fitted) {
  detail::require(exact.size() == fitted.size(), ErrorCode::grid_mismatch,
                  "exact grid has " + std::to_string(exact.size()) + " points, fitted has " +
                      std::to_string(fitted.size()));
  ResidualReport r;
  r.relative.reserve(exact.size());
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const double diff = std::abs(fitted[k] - exact[k]);
    double rel = 0.0;
    if (diff > 0.0) {
      rel = exact[k] != 0.0 ? diff / std::abs(exact[k]) : std::numeric_limits<double>::infinity();
    }
    r.relative.push_back(rel);
    r.max_relative = std::max(r.max_relative, rel);
    r.mean_relative += rel;
  }
  if (!r.relative.empty()) r.mean_relative /= double(r.relative.size());
  return r;
}

}  // namespace polarq
