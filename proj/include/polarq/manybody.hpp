#pragma once

// 2^N qubit-basis Hamiltonian for an array of pendular qubits.
//
// Basis index b stores molecule i in bit (n - 1 - i): molecule 0 is the most
// significant bit and |00...0> is index 0. Every module in the library uses
// this ordering.
//
//   H = sum_i diag(w0, w1)_i + sum_{i<j} g_ij M_i M_j,
//   M = [[c0, xme], [xme, c1]],   g_ij = Omega_ij (1 - 3 cos^2 alpha_ij).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "polarq/error.hpp"
#include "polarq/lanczos.hpp"
#include "polarq/lattice.hpp"
#include "polarq/pendular.hpp"

namespace polarq {

inline constexpr int kMaxMolecules = 24;
inline constexpr int kMaxDenseMolecules = 14;

inline std::uint64_t site_mask(int n, int site) { return std::uint64_t{1} << (n - 1 - site); }

class QubitHamiltonian {
 public:
  struct Bond {
    int i;
    int j;
    double g;  // Omega_ij * (1 - 3 cos^2 alpha_ij)
  };

  QubitHamiltonian(const QubitPair& qp, std::span<const PairCoupling> couplings, int n)
      : n_(n), qp_(qp) {
    detail::require(n >= 1, ErrorCode::invalid_argument, "need at least one molecule");
    detail::require(n <= kMaxMolecules, ErrorCode::capacity,
                    "n = " + std::to_string(n) + " exceeds the " +
                        std::to_string(kMaxMolecules) + "-molecule limit");
    for (const auto& c : couplings) {
      detail::require(c.i >= 0 && c.j >= 0 && c.i < n && c.j < n, ErrorCode::index_out_of_range,
                      "coupling (" + std::to_string(c.i) + ", " + std::to_string(c.j) +
                          ") outside " + std::to_string(n) + " sites");
      detail::require(c.i != c.j, ErrorCode::invalid_argument, "self-coupling");
      bonds_.push_back({std::min(c.i, c.j), std::max(c.i, c.j), c.strength()});
    }
    build_diagonal();
  }

  int n() const { return n_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_; }
  const QubitPair& qubit() const { return qp_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const Eigen::VectorXd& diagonal() const { return diag_; }

  /// y = H x without materializing H.
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    const Eigen::Index d = dim();
    y = diag_.cwiseProduct(x);
    const double m[2] = {qp_.c0, qp_.c1};
    const double xme = qp_.xme;
    for (const auto& bond : bonds_) {
      const std::uint64_t mi = site_mask(n_, bond.i);
      const std::uint64_t mj = site_mask(n_, bond.j);
      const double gx = bond.g * xme;
      const double gxx = gx * xme;
      for (Eigen::Index b = 0; b < d; ++b) {
        const auto ub = static_cast<std::uint64_t>(b);
        const int ai = (ub & mi) ? 1 : 0;
        const int aj = (ub & mj) ? 1 : 0;
        y(b) += gx * m[aj] * x(static_cast<Eigen::Index>(ub ^ mi)) +
                gx * m[ai] * x(static_cast<Eigen::Index>(ub ^ mj)) +
                gxx * x(static_cast<Eigen::Index>(ub ^ mi ^ mj));
      }
    }
  }

  Eigen::MatrixXd dense() const {
    detail::require(n_ <= kMaxDenseMolecules, ErrorCode::capacity,
                    "dense matrix limited to n <= " + std::to_string(kMaxDenseMolecules));
    const Eigen::Index d = dim();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    h.diagonal() = diag_;
    const double m[2] = {qp_.c0, qp_.c1};
    for (const auto& bond : bonds_) {
      const std::uint64_t mi = site_mask(n_, bond.i);
      const std::uint64_t mj = site_mask(n_, bond.j);
      for (Eigen::Index b = 0; b < d; ++b) {
        const auto ub = static_cast<std::uint64_t>(b);
        const int ai = (ub & mi) ? 1 : 0;
        const int aj = (ub & mj) ? 1 : 0;
        h(b, static_cast<Eigen::Index>(ub ^ mi)) += bond.g * qp_.xme * m[aj];
        h(b, static_cast<Eigen::Index>(ub ^ mj)) += bond.g * qp_.xme * m[ai];
        h(b, static_cast<Eigen::Index>(ub ^ mi ^ mj)) += bond.g * qp_.xme * qp_.xme;
      }
    }
    return h;
  }

 private:
  void build_diagonal() {
    const Eigen::Index d = dim();
    diag_.resize(d);
    const double w[2] = {qp_.w0, qp_.w1};
    const double m[2] = {qp_.c0, qp_.c1};
    for (Eigen::Index b = 0; b < d; ++b) {
      const auto ub = static_cast<std::uint64_t>(b);
      double e = 0.0;
      for (int i = 0; i < n_; ++i) e += w[(ub & site_mask(n_, i)) ? 1 : 0];
      for (const auto& bond : bonds_) {
        e += bond.g * m[(ub & site_mask(n_, bond.i)) ? 1 : 0] *
             m[(ub & site_mask(n_, bond.j)) ? 1 : 0];
      }
      diag_(b) = e;
    }
  }

  int n_;
  QubitPair qp_;
  std::vector<Bond> bonds_;
  Eigen::VectorXd diag_;
};

inline QubitHamiltonian build_hamiltonian(const QubitPair& qp,
                                          std::span<const PairCoupling> couplings, int n) {
  return QubitHamiltonian(qp, couplings, n);
}

// ---------------------------------------------------------------------------
// Spectrum

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending, units of B
  Eigen::MatrixXd eigenvectors;  // orthonormal columns in the qubit basis
  bool complete = false;         // true iff every eigenpair of H is present
  double max_residual = 0.0;

  Eigen::Index size() const { return eigenvalues.size(); }
  Eigen::VectorXd ground_state() const { return eigenvectors.col(0); }
};

enum class SolverMode { automatic, dense, iterative };

struct EigenRequest {
  std::optional<int> count;  // empty = all eigenpairs

  static EigenRequest all() { return {}; }
  static EigenRequest lowest(int k) { return {k}; }
};

namespace detail {

// Largest-magnitude amplitude of every column made positive.
inline void fix_phases(Eigen::MatrixXd& vecs) {
  for (Eigen::Index k = 0; k < vecs.cols(); ++k) {
    Eigen::Index idx = 0;
    vecs.col(k).cwiseAbs().maxCoeff(&idx);
    if (vecs(idx, k) < 0.0) vecs.col(k) *= -1.0;
  }
}

inline double max_residual(const QubitHamiltonian& h, const Eigen::VectorXd& vals,
                           const Eigen::MatrixXd& vecs) {
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  double worst = 0.0;
  Eigen::VectorXd hv;
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    h.apply(vecs.col(k), hv);
    worst = std::max(worst, (hv - vals(k) * vecs.col(k)).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

}  // namespace detail

inline Spectrum spectrum(const QubitHamiltonian& h, EigenRequest request = EigenRequest::all(),
                         SolverMode mode = SolverMode::automatic,
                         const LanczosOptions& lanczos = {}) {
  const Eigen::Index dim = h.dim();
  if (request.count) {
    detail::require(*request.count >= 1 && *request.count <= dim, ErrorCode::invalid_argument,
                    "requested eigenpair count out of range");
  }
  const bool dense_allowed = h.n() <= kMaxDenseMolecules;
  bool use_dense = false;
  switch (mode) {
    case SolverMode::dense:
      detail::require(dense_allowed, ErrorCode::capacity, "dense mode limited to dim <= 2^14");
      use_dense = true;
      break;
    case SolverMode::iterative:
      detail::require(request.count.has_value(), ErrorCode::invalid_argument,
                      "iterative mode needs an eigenpair count");
      break;
    case SolverMode::automatic:
      use_dense = dense_allowed;
      detail::require(use_dense || request.count.has_value(), ErrorCode::capacity,
                      "full spectrum limited to dim <= 2^14");
      break;
  }

  Spectrum out;
  if (use_dense) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
    if (es.info() != Eigen::Success) {
      throw SolverFailure("dense eigensolver failed", std::numeric_limits<double>::infinity());
    }
    const Eigen::Index k = request.count.value_or(dim);
    out.eigenvalues = es.eigenvalues().head(k);
    out.eigenvectors = es.eigenvectors().leftCols(k);
    out.complete = (k == dim);
  } else {
    auto op = [&h](const Eigen::VectorXd& x, Eigen::VectorXd& y) { h.apply(x, y); };
    auto res = lanczos_lowest(op, dim, *request.count, lanczos);
    out.eigenvalues = std::move(res.eigenvalues);
    out.eigenvectors = std::move(res.eigenvectors);
    out.complete = (*request.count == dim);
  }
  detail::fix_phases(out.eigenvectors);
  if (out.eigenvalues.size() <= 64) {
    out.max_residual = detail::max_residual(h, out.eigenvalues, out.eigenvectors);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ground-state purity, gap, thermal excitation

/// Probability of finding the state outside |00...0>, i.e. 1 - |psi_0|^2,
/// evaluated as the tail sum so that values far below machine epsilon keep
/// full relative precision.
inline double p_not_all_zero(const Eigen::VectorXd& ground) {
  detail::require(ground.size() >= 1, ErrorCode::invalid_argument, "empty state");
  const double norm = ground.norm();
  detail::require(std::abs(norm - 1.0) <= 1e-9, ErrorCode::normalization,
                  "state norm " + std::to_string(norm) + " differs from 1");
  const double tail = ground.tail(ground.size() - 1).squaredNorm() / (norm * norm);
  return std::clamp(tail, 0.0, 1.0);
}

inline double energy_gap(const Spectrum& spec) {
  detail::require(spec.eigenvalues.size() >= 2, ErrorCode::insufficient_spectrum,
                  "energy gap needs at least two eigenvalues");
  return std::max(0.0, spec.eigenvalues(1) - spec.eigenvalues(0));
}

struct ThermalExcitation {
  double probability = 0.0;
  double log10_probability = -std::numeric_limits<double>::infinity();
  bool underflow = false;  // true when the probability is below 1e-300 and reported as 0
};

inline constexpr double kProbabilityFloor = 1e-300;

/// Boltzmann weight of all states above the ground state at k_B T / B = kt.
inline ThermalExcitation thermal_excitation(const Spectrum& spec, double kt) {
  detail::require(spec.complete, ErrorCode::insufficient_spectrum,
                  "thermal sums need the full spectrum");
  detail::require(std::isfinite(kt) || kt == std::numeric_limits<double>::infinity(),
                  ErrorCode::invalid_argument, "kt must not be NaN");
  detail::require(kt >= 0.0, ErrorCode::invalid_argument, "kt must be >= 0");
  ThermalExcitation out;
  const Eigen::Index d = spec.eigenvalues.size();
  if (kt == 0.0 || d == 1) {
    out.probability = 0.0;
    return out;
  }
  const double e0 = spec.eigenvalues(0);
  // log of sum_{k>=1} exp(-(E_k - E_0)/kt) via log-sum-exp.
  double lmax = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 1; k < d; ++k) lmax = std::max(lmax, -(spec.eigenvalues(k) - e0) / kt);
  double acc = 0.0;
  for (Eigen::Index k = 1; k < d; ++k) {
    acc += std::exp(-(spec.eigenvalues(k) - e0) / kt - lmax);
  }
  const double log_excited = lmax + std::log(acc);
  // P = Z'/(1 + Z') with Z' = exp(log_excited)
  const double log_p = log_excited - std::log1p(std::exp(log_excited));
  out.log10_probability = log_p / std::log(10.0);
  const double p = std::exp(log_p);
  if (p < kProbabilityFloor) {
    out.probability = 0.0;
    out.underflow = true;
  } else {
    out.probability = p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// First-order perturbation theory around |00...0>

struct PerturbativeGroundState {
  Eigen::VectorXd state;  // normalized
  double bound = 0.0;     // N * (Omega/B)^2 * Vbar^2
  double omega = 0.0;     // largest |g_ij| used to scale Vbar
  double vbar = 0.0;      // max |<k|V|0>| / omega over excited states k
};

/// First-order ground state with single excitations (<1_i|V|0> = xme c0 sum_j g_ij,
/// denominator -dW) and pair excitations (<1_i 1_j|V|0> = xme^2 g_ij, denominator -2 dW).
inline PerturbativeGroundState perturbative_ground_state(const QubitPair& qp,
                                                         std::span<const PairCoupling> couplings,
                                                         int n) {
  const QubitHamiltonian h(qp, couplings, n);  // validates indices and capacity
  detail::require(std::abs(qp.dw) > 1e-12, ErrorCode::perturbation_invalid,
                  "degenerate unperturbed qubit levels (dw = 0)");
  PerturbativeGroundState out;
  out.state = Eigen::VectorXd::Zero(h.dim());
  out.state(0) = 1.0;
  double vmax = 0.0;
  std::vector<double> single(std::size_t(n), 0.0);
  for (const auto& bond : h.bonds()) {
    out.omega = std::max(out.omega, std::abs(bond.g));
    single[std::size_t(bond.i)] += qp.xme * qp.c0 * bond.g;
    single[std::size_t(bond.j)] += qp.xme * qp.c0 * bond.g;
    const double pair = qp.xme * qp.xme * bond.g;
    const auto idx = static_cast<Eigen::Index>(site_mask(n, bond.i) | site_mask(n, bond.j));
    out.state(idx) += -pair / (2.0 * qp.dw);
    vmax = std::max(vmax, std::abs(pair));
  }
  for (int i = 0; i < n; ++i) {
    out.state(static_cast<Eigen::Index>(site_mask(n, i))) = -single[std::size_t(i)] / qp.dw;
    vmax = std::max(vmax, std::abs(single[std::size_t(i)]));
  }
  out.state.normalize();
  if (out.omega > 0.0) out.vbar = vmax / out.omega;
  out.bound = n * vmax * vmax;
  return out;
}

// ---------------------------------------------------------------------------
// Conditional frequency shift for a two-molecule pair

/// Delta omega / B = |(E_11 - E_10) - (E_01 - E_00)| from the exact 4x4
/// spectrum. Eigenstates are labeled by the assignment that maximizes the total
/// overlap with the basis states. For identical molecules |01> and |10> mix
/// equally, but Delta omega = |E_11 + E_00 - E_01 - E_10| does not depend on
/// which of the two is which, so only ties that change the |00> or |11> label
/// are rejected.
inline double frequency_shift(const QubitPair& qp, double omega, double alpha) {
  const PairCoupling c{0, 1, omega, alpha};
  if (c.strength() == 0.0) return 0.0;  // avoid returning eigenvalue round-off
  const QubitHamiltonian h(qp, std::span<const PairCoupling>(&c, 1), 2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(Eigen::Matrix4d(h.dense()));
  const Eigen::Matrix4d overlap = es.eigenvectors().cwiseAbs2();  // (basis, eigenstate)

  std::array<int, 4> perm{0, 1, 2, 3};  // perm[basis] = eigenstate
  double best = -1.0;
  std::vector<std::array<int, 4>> winners;
  do {
    double score = 0.0;
    for (int b = 0; b < 4; ++b) score += overlap(b, perm[std::size_t(b)]);
    if (score > best + 1e-9) {
      best = score;
      winners.assign(1, perm);
    } else if (std::abs(score - best) <= 1e-9) {
      winners.push_back(perm);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (const auto& p : winners) {
    if (p[0] != winners.front()[0] || p[3] != winners.front()[3]) {
      detail::fail(ErrorCode::labeling, "ambiguous eigenstate labeling for |00> / |11>");
    }
  }
  const auto& p = winners.front();
  const Eigen::Vector4d e = es.eigenvalues();
  return std::abs(e(p[3]) - e(p[2]) - e(p[1]) + e(p[0]));
}

}  // namespace polarq
