#pragma once

// Single-molecule pendular (Stark) problem in the M = 0 free-rotor basis.
//
// The rotor Hamiltonian in units of the rotational constant B is
//   H/B = J^2 - x cos(theta),   x = mu * eps / B,
// which is tridiagonal over Y_J^0 with
//   <J|cos(theta)|J+1> = (J+1) / sqrt((2J+1)(2J+3)).

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "polarq/error.hpp"

namespace polarq {

struct PendularSolution {
  double x = 0.0;
  int j_max = 0;
  Eigen::VectorXd energies;      // W_k / B, ascending
  Eigen::MatrixXd coefficients;  // column k = state k over Y_J^0, J = 0..j_max
};

/// The two-level reduction used as a qubit. Energies are in units of B.
struct QubitPair {
  double x = 0.0;
  double w0 = 0.0;
  double w1 = 0.0;
  double dw = 0.0;
  double c0 = 0.0;   // <0|cos|0>
  double c1 = 0.0;   // <1|cos|1>
  double xme = 0.0;  // <0|cos|1>
};

namespace detail {

inline double cos_element(int j) {
  const double jd = j;
  return (jd + 1.0) / std::sqrt((2.0 * jd + 1.0) * (2.0 * jd + 3.0));
}

inline void check_field(double x) {
  require(std::isfinite(x) && x >= 0.0, ErrorCode::invalid_argument,
          "reduced field must be finite and >= 0, got " + std::to_string(x));
}

inline void check_truncation(int j_max) {
  require(j_max >= 1, ErrorCode::invalid_truncation,
          "j_max must be >= 1, got " + std::to_string(j_max));
}

// Eigen-decomposition of the tridiagonal rotor matrix.
inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_tridiagonal(double x, int j_max) {
  Eigen::VectorXd diag(j_max + 1);
  Eigen::VectorXd sub(j_max);
  for (int j = 0; j <= j_max; ++j) diag(j) = double(j) * (j + 1);
  for (int j = 0; j < j_max; ++j) sub(j) = -x * cos_element(j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::convergence_failure, "tridiagonal eigensolver did not converge");
  }
  return es;
}

}  // namespace detail

/// Matrix of cos(theta) in the M = 0 basis truncated at j_max.
inline Eigen::MatrixXd cos_theta_matrix(int j_max) {
  detail::check_truncation(j_max);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(j_max + 1, j_max + 1);
  for (int j = 0; j < j_max; ++j) {
    c(j, j + 1) = c(j + 1, j) = detail::cos_element(j);
  }
  return c;
}

inline Eigen::MatrixXd build_pendular_hamiltonian(double x, int j_max) {
  detail::check_field(x);
  detail::check_truncation(j_max);
  Eigen::MatrixXd h = -x * cos_theta_matrix(j_max);
  for (int j = 0; j <= j_max; ++j) h(j, j) = double(j) * (j + 1);
  return h;
}

/// Diagonalizes at a fixed truncation. Eigenvector signs are fixed so that the
/// largest-magnitude coefficient of each state is positive.
inline PendularSolution solve_pendular_fixed(double x, int j_max) {
  detail::check_field(x);
  detail::check_truncation(j_max);
  auto es = detail::solve_tridiagonal(x, j_max);
  PendularSolution sol;
  sol.x = x;
  sol.j_max = j_max;
  sol.energies = es.eigenvalues();
  sol.coefficients = es.eigenvectors();
  for (Eigen::Index k = 0; k < sol.coefficients.cols(); ++k) {
    Eigen::Index dominant = 0;
    sol.coefficients.col(k).cwiseAbs().maxCoeff(&dominant);
    if (sol.coefficients(dominant, k) < 0.0) sol.coefficients.col(k) *= -1.0;
  }
  return sol;
}

inline constexpr int kPendularMaxTruncation = 200;

/// Grows j_max in steps of 2 until the qubit splitting W1 - W0 changes by
/// less than `tol` between successive truncations.
inline PendularSolution solve_pendular(double x, double tol = 1e-10) {
  detail::check_field(x);
  detail::require(tol > 0.0, ErrorCode::invalid_argument, "tol must be > 0");
  auto splitting = [x](int j_max) {
    auto es = detail::solve_tridiagonal(x, j_max);
    return es.eigenvalues()(1) - es.eigenvalues()(0);
  };
  double previous = splitting(2);
  for (int j_max = 4; j_max <= kPendularMaxTruncation; j_max += 2) {
    const double current = splitting(j_max);
    if (std::abs(current - previous) < tol) return solve_pendular_fixed(x, j_max);
    previous = current;
  }
  detail::fail(ErrorCode::convergence_failure,
               "pendular spectrum not converged by j_max = " +
                   std::to_string(kPendularMaxTruncation) + " at x = " + std::to_string(x));
}

inline QubitPair qubit_pair(const PendularSolution& sol) {
  detail::require(sol.energies.size() >= 2 && sol.coefficients.cols() >= 2,
                  ErrorCode::invalid_argument, "pendular solution needs >= 2 states");
  const Eigen::MatrixXd c = cos_theta_matrix(sol.j_max);
  const auto v0 = sol.coefficients.col(0);
  const auto v1 = sol.coefficients.col(1);
  QubitPair qp;
  qp.x = sol.x;
  qp.w0 = sol.energies(0);
  qp.w1 = sol.energies(1);
  qp.dw = qp.w1 - qp.w0;
  qp.c0 = v0.dot(c * v0);
  qp.c1 = v1.dot(c * v1);
  qp.xme = v0.dot(c * v1);
  return qp;
}

inline QubitPair qubit_pair(double x, double tol = 1e-10) {
  return qubit_pair(solve_pendular(x, tol));
}

/// Reduced field x = mu*eps/B from a dipole in Debye, a field in kV/cm and a
/// rotational constant in cm^-1.
inline double field_to_x(double mu_debye, double field_kv_cm, double b_cm) {
  detail::require(mu_debye > 0.0 && field_kv_cm > 0.0 && b_cm > 0.0, ErrorCode::invalid_units,
                  "dipole, field and rotational constant must all be > 0");
  return 0.0168 * mu_debye * field_kv_cm / b_cm;
}

}  // namespace polarq
