#pragma once

// NMR-style CNOT built from the conditional frequency shift between two
// coupled molecules: a pi/2 pulse on the target about -y (driving both
// control subspaces), free evolution for the time that accumulates a pi
// conditional phase, and a pi/2 pulse about +y.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "polarq/error.hpp"

namespace polarq {

/// How Delta omega is read: `cyclic` accumulates phase 2*pi*dw*t (the waiting
/// time for a pi phase is 1/(2 dw)); `angular` accumulates dw*t (pi/dw).
enum class FrequencyConvention { cyclic, angular };

struct NmrCnotReport {
  Eigen::Matrix4cd unitary;  // basis |control target>
  double wait_time = 0.0;
  double conditional_phase = 0.0;
  double deviation = 0.0;  // max |U - e^{ig} (P(c) x P(t)) CNOT| after phase stripping
  double global_phase = 0.0;
  double control_phase = 0.0;
  double target_phase = 0.0;
  double case1_target_one = 0.0;   // P(target = 1) for input |0,1>
  double case2_target_zero = 0.0;  // P(target = 0) for input |1,1>
};

inline Eigen::Matrix4cd cnot_matrix() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

/// Rotation exp(-i angle (axis_sign * Y) / 2) on one qubit.
inline Eigen::Matrix2cd y_rotation(double angle, double axis_sign) {
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0) * axis_sign;
  Eigen::Matrix2cd r;
  r << c, -s, s, c;
  return r;
}

/// Distance from CNOT after removing a global phase and z-phases on both
/// qubits, fitted from the entries that CNOT leaves non-zero.
inline double cnot_deviation(const Eigen::Matrix4cd& u, double* global = nullptr,
                             double* control = nullptr, double* target = nullptr) {
  const double g = std::arg(u(0, 0));
  const double t = std::arg(u(1, 1)) - g;
  const double c = std::arg(u(2, 3)) - g;
  const Eigen::Vector4cd d(1.0, std::polar(1.0, t), std::polar(1.0, c), std::polar(1.0, c + t));
  const Eigen::Matrix4cd model = std::polar(1.0, g) * d.asDiagonal() * cnot_matrix();
  if (global) *global = g;
  if (control) *control = c;
  if (target) *target = t;
  return (u - model).cwiseAbs().maxCoeff();
}

inline NmrCnotReport nmr_cnot_sequence(double dw_shift,
                                       FrequencyConvention convention = FrequencyConvention::cyclic,
                                       double wait_scale = 1.0) {
  detail::require(dw_shift > 0.0 && std::isfinite(dw_shift), ErrorCode::invalid_argument,
                  "frequency shift must be > 0");
  detail::require(wait_scale >= 0.0 && std::isfinite(wait_scale), ErrorCode::invalid_argument,
                  "wait scale must be >= 0");
  const double pi = std::numbers::pi;
  const double angular_shift = convention == FrequencyConvention::cyclic ? 2.0 * pi * dw_shift
                                                                         : dw_shift;
  NmrCnotReport r;
  r.wait_time = wait_scale * (convention == FrequencyConvention::cyclic ? 1.0 / (2.0 * dw_shift)
                                                                        : pi / dw_shift);
  r.conditional_phase = angular_shift * r.wait_time;

  // Same target rotation in both control subspaces: I (x) R.
  auto on_target = [](const Eigen::Matrix2cd& m) {
    Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
    out.topLeftCorner<2, 2>() = m;
    out.bottomRightCorner<2, 2>() = m;
    return out;
  };
  const Eigen::Matrix4cd first = on_target(y_rotation(pi / 2.0, -1.0));
  const Eigen::Matrix4cd last = on_target(y_rotation(pi / 2.0, +1.0));
  Eigen::Matrix4cd evolve = Eigen::Matrix4cd::Identity();
  evolve(3, 3) = std::polar(1.0, -r.conditional_phase);

  r.unitary = last * evolve * first;
  r.deviation = cnot_deviation(r.unitary, &r.global_phase, &r.control_phase, &r.target_phase);
  r.case1_target_one = std::norm(r.unitary(1, 1));   // |01> -> |01>
  r.case2_target_zero = std::norm(r.unitary(2, 3));  // |11> -> |10>
  return r;
}

}  // namespace polarq
