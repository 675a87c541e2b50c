#pragma once

// Thick-restart Lanczos for the lowest eigenpairs of a real symmetric operator
// given only through its action y = A x. Every new Krylov vector is fully
// reorthogonalized (two classical Gram-Schmidt passes), so the projected
// matrix is formed from the computed overlaps rather than from the three-term
// recurrence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "polarq/error.hpp"

namespace polarq {

struct LanczosOptions {
  int krylov_dim = 0;       // 0 selects max(2k + 20, 40)
  int max_restarts = 500;
  double tol = 1e-11;       // relative residual ||Av - lv|| / max(1, |l|)
  std::uint64_t seed = 0x5eed;
};

struct LanczosResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  double max_residual = 0.0;
  int restarts = 0;
};

using LinearOperator = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

inline LanczosResult lanczos_lowest(const LinearOperator& apply, Eigen::Index dim, int k,
                                    const LanczosOptions& opts = {}) {
  detail::require(k >= 1 && k <= dim, ErrorCode::invalid_argument,
                  "requested eigenpair count out of range");
  int m = opts.krylov_dim > 0 ? opts.krylov_dim : std::max(2 * k + 20, 40);
  m = static_cast<int>(std::min<Eigen::Index>(m, dim));
  const int keep = std::min(std::max(k + (m - k) / 2, k), m - 1);

  Eigen::MatrixXd basis(dim, m + 1);
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(m + 1, m);  // overlaps <v_i|A v_j>

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  auto random_unit = [&](int filled) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = gauss(rng);
    for (int pass = 0; pass < 2 && filled > 0; ++pass) {
      v -= basis.leftCols(filled) * (basis.leftCols(filled).transpose() * v);
    }
    return Eigen::VectorXd(v / v.norm());
  };

  basis.col(0) = random_unit(0);
  int start = 0;
  Eigen::VectorXd w(dim);
  double worst = 0.0;

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    for (int j = start; j < m; ++j) {
      apply(basis.col(j), w);
      Eigen::VectorXd h = basis.leftCols(j + 1).transpose() * w;
      w -= basis.leftCols(j + 1) * h;
      const Eigen::VectorXd h2 = basis.leftCols(j + 1).transpose() * w;
      w -= basis.leftCols(j + 1) * h2;
      h += h2;
      proj.col(j).head(j + 1) = h;
      double beta = w.norm();
      if (beta <= 1e-14 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
        // Invariant subspace found; continue with a fresh orthogonal direction.
        beta = 0.0;
        basis.col(j + 1) = random_unit(j + 1);
      } else {
        basis.col(j + 1) = w / beta;
      }
      proj(j + 1, j) = beta;
    }

    Eigen::MatrixXd t = proj.topRows(m);
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::VectorXd theta = es.eigenvalues();
    const Eigen::MatrixXd y = es.eigenvectors();
    const double beta = proj(m, m - 1);

    worst = 0.0;
    for (int i = 0; i < k; ++i) {
      const double res = std::abs(beta * y(m - 1, i)) / std::max(1.0, std::abs(theta(i)));
      worst = std::max(worst, res);
    }
    if (worst <= opts.tol || m == dim) {
      LanczosResult out;
      out.eigenvalues = theta.head(k);
      out.eigenvectors = basis.leftCols(m) * y.leftCols(k);
      out.restarts = restart;
      out.max_residual = 0.0;
      Eigen::VectorXd av(dim);
      for (int i = 0; i < k; ++i) {
        Eigen::VectorXd v = out.eigenvectors.col(i);
        v.normalize();
        out.eigenvectors.col(i) = v;
        apply(v, av);
        const double res = (av - out.eigenvalues(i) * v).norm() /
                           std::max(1.0, std::abs(out.eigenvalues(i)));
        out.max_residual = std::max(out.max_residual, res);
      }
      return out;
    }

    // Thick restart: keep the lowest `keep` Ritz vectors plus the residual direction.
    const Eigen::MatrixXd ritz = basis.leftCols(m) * y.leftCols(keep);
    const Eigen::VectorXd residual_dir = basis.col(m);
    basis.leftCols(keep) = ritz;
    basis.col(keep) = residual_dir;
    proj.setZero();
    for (int i = 0; i < keep; ++i) {
      proj(i, i) = theta(i);
      proj(keep, i) = beta * y(m - 1, i);
    }
    start = keep;
  }
  throw SolverFailure("Lanczos did not converge after " + std::to_string(opts.max_restarts) +
                          " restarts",
                      worst);
}

}  // namespace polarq
