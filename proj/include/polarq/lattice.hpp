#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polarq/error.hpp"

namespace polarq {

enum class GeometryKind { linear, square, custom };

/// Site positions in units of the nearest-neighbour spacing a.
struct ArrayGeometry {
  GeometryKind kind = GeometryKind::custom;
  int rows = 0;
  int cols = 0;
  std::vector<Eigen::Vector3d> positions;
  Eigen::Vector3d field_direction = Eigen::Vector3d::UnitZ();

  int size() const { return static_cast<int>(positions.size()); }

  /// n sites along the x axis, field along z (perpendicular to the array).
  static ArrayGeometry linear(int n) {
    detail::require(n >= 1, ErrorCode::invalid_argument, "linear array needs n >= 1");
    ArrayGeometry g;
    g.kind = GeometryKind::linear;
    g.rows = 1;
    g.cols = n;
    for (int i = 0; i < n; ++i) g.positions.emplace_back(double(i), 0.0, 0.0);
    return g;
  }

  /// Row-major rows x cols lattice in the xy plane, field along z.
  static ArrayGeometry square(int rows, int cols) {
    detail::require(rows >= 1 && cols >= 1, ErrorCode::invalid_argument,
                    "square lattice needs rows, cols >= 1");
    ArrayGeometry g;
    g.kind = GeometryKind::square;
    g.rows = rows;
    g.cols = cols;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) g.positions.emplace_back(double(c), double(r), 0.0);
    return g;
  }

  static ArrayGeometry custom(std::vector<Eigen::Vector3d> positions,
                              const Eigen::Vector3d& field_direction) {
    detail::require(!positions.empty(), ErrorCode::invalid_argument,
                    "custom geometry needs at least one site");
    const double norm = field_direction.norm();
    detail::require(std::isfinite(norm) && norm > 0.0, ErrorCode::invalid_argument,
                    "field direction must be a non-zero vector");
    ArrayGeometry g;
    g.kind = GeometryKind::custom;
    g.positions = std::move(positions);
    g.field_direction = field_direction / norm;
    return g;
  }
};

struct PairCoupling {
  int i = 0;
  int j = 0;
  double omega = 0.0;  // Omega_ij / B
  double alpha = 0.0;  // angle between r_ij and the field, radians

  double strength() const;
};

/// 1 - 3 cos^2(alpha); vanishes at the magic angle.
inline double angular_factor(double alpha) {
  const double c = std::cos(alpha);
  return 1.0 - 3.0 * c * c;
}

inline double PairCoupling::strength() const { return omega * angular_factor(alpha); }

enum class CouplingRange { all_pairs, nearest_neighbor };

inline std::vector<PairCoupling> pair_couplings(const ArrayGeometry& geom, double omega_nn,
                                                CouplingRange range = CouplingRange::all_pairs) {
  detail::require(std::isfinite(omega_nn) && omega_nn >= 0.0, ErrorCode::invalid_argument,
                  "omega_nn must be finite and >= 0");
  const int n = geom.size();
  const Eigen::Vector3d field = geom.field_direction.normalized();
  std::vector<PairCoupling> out;
  std::vector<double> distance;
  out.reserve(std::size_t(n) * std::max(n - 1, 0) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Eigen::Vector3d r = geom.positions[j] - geom.positions[i];
      const double d = r.norm();
      if (!(d > 0.0)) {
        detail::fail(ErrorCode::degenerate_geometry,
                     "sites " + std::to_string(i) + " and " + std::to_string(j) +
                         " share a position");
      }
      const double cosine = std::clamp(r.dot(field) / d, -1.0, 1.0);
      out.push_back({i, j, omega_nn / (d * d * d), std::acos(cosine)});
      distance.push_back(d);
    }
  }
  if (range == CouplingRange::nearest_neighbor && !out.empty()) {
    const double shortest = *std::min_element(distance.begin(), distance.end());
    std::vector<PairCoupling> kept;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (distance[k] <= shortest * (1.0 + 1e-9)) kept.push_back(out[k]);
    }
    out = std::move(kept);
  }
  return out;
}

}  // namespace polarq
