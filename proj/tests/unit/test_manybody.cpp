#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "polarq/lanczos.hpp"
#include "polarq/manybody.hpp"

using namespace polarq;

namespace {

QubitHamiltonian linear_h(double x, double omega, int n) {
  const auto c = pair_couplings(ArrayGeometry::linear(n), omega);
  return build_hamiltonian(qubit_pair(x), c, n);
}

std::vector<std::tuple<int, int, double>> bonds_of(const QubitHamiltonian& h) {
  std::vector<std::tuple<int, int, double>> b;
  for (const auto& bond : h.bonds()) b.emplace_back(bond.i, bond.j, bond.g);
  return b;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no polarq::Error thrown";
  return ErrorCode::invalid_argument;
}

// Smallest root of the symmetric-sector 3x3 block of the two-molecule
// Hamiltonian (basis |00>, (|01>+|10>)/sqrt2, |11>), via the trigonometric
// solution of the characteristic cubic.
double two_molecule_ground(const QubitPair& q, double g) {
  const double s2 = std::sqrt(2.0);
  Eigen::Matrix3d a;
  a << 2 * q.w0 + g * q.c0 * q.c0, g * s2 * q.c0 * q.xme, g * q.xme * q.xme,
      g * s2 * q.c0 * q.xme, q.w0 + q.w1 + g * (q.c0 * q.c1 + q.xme * q.xme), g * s2 * q.c1 * q.xme,
      g * q.xme * q.xme, g * s2 * q.c1 * q.xme, 2 * q.w1 + g * q.c1 * q.c1;
  const double m = a.trace() / 3.0;
  const Eigen::Matrix3d b = a - m * Eigen::Matrix3d::Identity();
  const double p = std::sqrt((b * b).trace() / 6.0);
  const double r = std::clamp((b / p).determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return m + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
}

}  // namespace

TEST(Hamiltonian, SingleMolecule) {
  const auto qp = qubit_pair(2.0);
  const QubitHamiltonian h(qp, {}, 1);
  const Eigen::MatrixXd d = h.dense();
  EXPECT_EQ(d(0, 0), qp.w0);
  EXPECT_EQ(d(1, 1), qp.w1);
  EXPECT_EQ(d(0, 1), 0.0);
}

TEST(Hamiltonian, TwoMoleculeEntries) {
  const auto qp = qubit_pair(2.0);
  const Eigen::MatrixXd d = linear_h(2.0, 1e-3, 2).dense();
  EXPECT_NEAR(d(0, 0), 2 * qp.w0 + 1e-3 * qp.c0 * qp.c0, 1e-15);
  EXPECT_NEAR(d(0, 3), 1e-3 * qp.xme * qp.xme, 1e-18);
  EXPECT_NEAR(d(1, 2), 1e-3 * qp.xme * qp.xme, 1e-18);
}

TEST(Hamiltonian, MatchesKroneckerOracle) {
  for (int n : {2, 3, 5}) {
    for (double x : {0.0, 2.0, 4.9}) {
      const auto h = linear_h(x, 3e-3, n);
      const Eigen::MatrixXd ref = oracle::kron_hamiltonian(h.qubit(), bonds_of(h), n);
      EXPECT_LT((h.dense() - ref).cwiseAbs().maxCoeff(), 1e-14) << "n=" << n << " x=" << x;
    }
  }
}

TEST(Hamiltonian, ThirdSiteCouplingPrefactor) {
  const auto h = linear_h(2.0, 1e-3, 3);
  bool found = false;
  for (const auto& b : h.bonds()) {
    if (b.i == 0 && b.j == 2) {
      EXPECT_DOUBLE_EQ(b.g, 1e-3 / 8);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Hamiltonian, MatrixFreeApplyMatchesDense) {
  oracle::Gen gen(31);
  const auto h = linear_h(3.0, 1e-2, 6);
  const Eigen::MatrixXd d = h.dense();
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd v(h.dim());
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = gen.uniform(-1, 1);
    Eigen::VectorXd y;
    h.apply(v, y);
    EXPECT_LT((y - d * v).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Hamiltonian, Errors) {
  const auto qp = qubit_pair(2.0);
  const PairCoupling bad{0, 3, 1e-3, std::numbers::pi / 2};
  EXPECT_EQ(code_of([&] { QubitHamiltonian(qp, std::span(&bad, 1), 3); }),
            ErrorCode::index_out_of_range);
  EXPECT_EQ(code_of([&] { QubitHamiltonian(qp, {}, 25); }), ErrorCode::capacity);
  EXPECT_EQ(code_of([&] { QubitHamiltonian(qp, {}, 0); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([&] { QubitHamiltonian(qp, {}, 15).dense(); }), ErrorCode::capacity);
}

TEST(Hamiltonian, UncoupledIsDiagonalSums) {
  const auto qp = qubit_pair(2.0);
  const auto h = linear_h(2.0, 0.0, 4);
  const Eigen::MatrixXd d = h.dense();
  for (Eigen::Index b = 0; b < 16; ++b) {
    const int ones = std::popcount(std::uint64_t(b));
    EXPECT_NEAR(d(b, b), ones * qp.w1 + (4 - ones) * qp.w0, 1e-13);
  }
  EXPECT_EQ((d - Eigen::MatrixXd(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Spectrum, UncoupledEigenvaluesAreSortedSums) {
  const auto qp = qubit_pair(2.0);
  const Spectrum s = spectrum(linear_h(2.0, 0.0, 3));
  std::vector<double> sums;
  for (int b = 0; b < 8; ++b) {
    const int ones = std::popcount(unsigned(b));
    sums.push_back(ones * qp.w1 + (3 - ones) * qp.w0);
  }
  std::sort(sums.begin(), sums.end());
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(s.eigenvalues(k), sums[std::size_t(k)], 1e-12);
  EXPECT_TRUE(s.complete);
}

TEST(Spectrum, TwoMoleculeGroundMatchesClosedForm) {
  const auto h = linear_h(2.0, 1e-3, 2);
  const Spectrum s = spectrum(h);
  EXPECT_NEAR(s.eigenvalues(0), two_molecule_ground(h.qubit(), 1e-3), 1e-12);
}

TEST(Spectrum, DenseAndIterativeAgree) {
  const auto h = linear_h(2.0, 1e-3, 9);
  const Spectrum dense = spectrum(h, EigenRequest::lowest(2), SolverMode::dense);
  const Spectrum iter = spectrum(h, EigenRequest::lowest(2), SolverMode::iterative);
  EXPECT_NEAR(dense.eigenvalues(0), iter.eigenvalues(0), 1e-9);
  EXPECT_NEAR(dense.eigenvalues(1), iter.eigenvalues(1), 1e-9);
  EXPECT_NEAR(std::abs(dense.ground_state().dot(iter.ground_state())), 1.0, 1e-9);
}

TEST(Spectrum, IterativeBeyondDenseLimit) {
  const auto h = linear_h(2.0, 1e-3, 15);
  const Spectrum s = spectrum(h, EigenRequest::lowest(1));
  EXPECT_FALSE(s.complete);
  EXPECT_LT(s.max_residual, 1e-9);
  EXPECT_EQ(code_of([&] { spectrum(h); }), ErrorCode::capacity);
}

TEST(Spectrum, RequestValidation) {
  const auto h = linear_h(2.0, 1e-3, 2);
  EXPECT_EQ(code_of([&] { spectrum(h, EigenRequest::lowest(0)); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([&] { spectrum(h, EigenRequest::lowest(5)); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([&] { spectrum(h, EigenRequest::all(), SolverMode::iterative); }),
            ErrorCode::invalid_argument);
}

TEST(Spectrum, ResidualsAndPhaseConvention) {
  const auto h = linear_h(4.9, 2e-2, 5);
  const Spectrum s = spectrum(h, EigenRequest::lowest(10));
  const Eigen::MatrixXd d = h.dense();
  const double scale = s.eigenvalues.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const Eigen::VectorXd v = s.eigenvectors.col(k);
    EXPECT_LE((d * v - s.eigenvalues(k) * v).cwiseAbs().maxCoeff(), 1e-9 * scale);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(v(arg), 0.0);
  }
  const Eigen::MatrixXd gram = s.eigenvectors.transpose() * s.eigenvectors;
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((d - d.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Lanczos, MatchesDenseOnRandomMatrix) {
  oracle::Gen gen(41);
  const int dim = 300;
  Eigen::MatrixXd a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c <= r; ++c) a(r, c) = a(c, r) = gen.uniform(-1, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const auto res = lanczos_lowest([&a](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = a * x; },
                                  dim, 4);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(res.eigenvalues(k), es.eigenvalues()(k), 1e-9);
}

TEST(Lanczos, SmallDimensionIsExact) {
  Eigen::MatrixXd a(3, 3);
  a << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  const auto res = lanczos_lowest([&a](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = a * x; },
                                  3, 3);
  EXPECT_NEAR(res.eigenvalues(0), 2 - std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(res.eigenvalues(2), 2 + std::sqrt(2.0), 1e-12);
}

TEST(Lanczos, ReportsNonConvergence) {
  const auto h = linear_h(2.0, 1e-3, 9);
  LanczosOptions opt;
  opt.krylov_dim = 4;
  opt.max_restarts = 1;
  opt.tol = 1e-300;
  try {
    spectrum(h, EigenRequest::lowest(2), SolverMode::iterative, opt);
    FAIL() << "expected SolverFailure";
  } catch (const SolverFailure& e) {
    EXPECT_EQ(e.code(), ErrorCode::solver_failure);
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Impurity, UncoupledGroundIsAllZero) {
  const Spectrum s = spectrum(linear_h(2.0, 0.0, 5), EigenRequest::lowest(1));
  EXPECT_EQ(p_not_all_zero(s.ground_state()), 0.0);
}

TEST(Impurity, QuadraticInCoupling) {
  const double p1 = p_not_all_zero(spectrum(linear_h(2.0, 1e-5, 6), EigenRequest::lowest(1)).ground_state());
  const double p2 = p_not_all_zero(spectrum(linear_h(2.0, 1e-4, 6), EigenRequest::lowest(1)).ground_state());
  EXPECT_NEAR(p2 / p1, 100.0, 5.0);
}

TEST(Impurity, ComplementSumsToOne) {
  const Eigen::VectorXd g = spectrum(linear_h(2.0, 1e-2, 6), EigenRequest::lowest(1)).ground_state();
  EXPECT_NEAR(p_not_all_zero(g) + g(0) * g(0), 1.0, 1e-14);
}

TEST(Impurity, RejectsUnnormalized) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
  v(0) = 1.1;
  EXPECT_EQ(code_of([&] { p_not_all_zero(v); }), ErrorCode::normalization);
}

TEST(Gap, UncoupledGapIsSplitting) {
  for (int n = 1; n <= 6; ++n) {
    const auto h = linear_h(2.0, 0.0, n);
    EXPECT_NEAR(energy_gap(spectrum(h, EigenRequest::lowest(2))), h.qubit().dw, 1e-12);
  }
}

TEST(Gap, CloseToSplittingAtWeakCoupling) {
  for (int n = 2; n <= 9; ++n) {
    const auto h = linear_h(2.0, 1e-4, n);
    const double gap = energy_gap(spectrum(h, EigenRequest::lowest(2)));
    EXPECT_LE(std::abs(gap - h.qubit().dw) / h.qubit().dw, 1e-3) << "n=" << n;
  }
}

TEST(Gap, DeviationLinearInCoupling) {
  const double dw = qubit_pair(2.0).dw;
  const double d1 = energy_gap(spectrum(linear_h(2.0, 0.04, 4), EigenRequest::lowest(2))) - dw;
  const double d2 = energy_gap(spectrum(linear_h(2.0, 0.02, 4), EigenRequest::lowest(2))) - dw;
  EXPECT_NEAR(d2 / d1, 0.5, 0.05);
}

TEST(Gap, InsensitiveToMoleculeCount) {
  double lo = 1e9, hi = -1e9;
  for (int n = 2; n <= 9; ++n) {
    const double g = energy_gap(spectrum(linear_h(2.0, 1e-4, n), EigenRequest::lowest(2)));
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  EXPECT_LT((hi - lo) / lo, 1e-3);
}

TEST(Gap, NeedsTwoEigenvalues) {
  const Spectrum s = spectrum(linear_h(2.0, 1e-3, 2), EigenRequest::lowest(1));
  EXPECT_EQ(code_of([&] { energy_gap(s); }), ErrorCode::insufficient_spectrum);
}

TEST(Thermal, HighTemperatureLimit) {
  for (int n : {1, 3, 5}) {
    const Spectrum s = spectrum(linear_h(2.0, 1e-3, n));
    EXPECT_NEAR(thermal_excitation(s, 1e12).probability, 1.0 - std::pow(2.0, -n), 1e-9);
  }
}

TEST(Thermal, TwoLevelBoltzmann) {
  const auto qp = qubit_pair(2.0);
  const Spectrum s = spectrum(QubitHamiltonian(qp, {}, 1));
  EXPECT_NEAR(thermal_excitation(s, qp.dw / std::log(2.0)).probability, 1.0 / 3.0, 1e-14);
}

TEST(Thermal, ColdArrayBound) {
  const Spectrum s = spectrum(linear_h(2.0, 1e-4, 8));
  const auto th = thermal_excitation(s, 0.002);
  EXPECT_LT(th.probability, 1e-12);
  EXPECT_TRUE(th.underflow);
  EXPECT_LT(th.log10_probability, -300.0);
}

TEST(Thermal, ZeroTemperatureAndErrors) {
  const Spectrum full = spectrum(linear_h(2.0, 1e-3, 3));
  const auto th = thermal_excitation(full, 0.0);
  EXPECT_EQ(th.probability, 0.0);
  EXPECT_FALSE(th.underflow);
  const Spectrum partial = spectrum(linear_h(2.0, 1e-3, 3), EigenRequest::lowest(3));
  EXPECT_EQ(code_of([&] { thermal_excitation(partial, 1.0); }), ErrorCode::insufficient_spectrum);
  EXPECT_EQ(code_of([&] { thermal_excitation(full, -1.0); }), ErrorCode::invalid_argument);
}

TEST(Thermal, MatchesDirectSumAtModerateTemperature) {
  const Spectrum s = spectrum(linear_h(2.0, 1e-2, 4));
  const double kt = 0.7;
  double z = 0.0, z0 = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double w = std::exp(-s.eigenvalues(k) / kt);
    z += w;
    if (k == 0) z0 = w;
  }
  EXPECT_NEAR(thermal_excitation(s, kt).probability, 1.0 - z0 / z, 1e-13);
}

TEST(Perturbative, UncoupledIsAllZero) {
  const auto qp = qubit_pair(2.0);
  const auto c = pair_couplings(ArrayGeometry::linear(4), 0.0);
  const auto pg = perturbative_ground_state(qp, c, 4);
  EXPECT_EQ(pg.state(0), 1.0);
  EXPECT_EQ(pg.state.tail(15).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(pg.bound, 0.0);
}

TEST(Perturbative, OverlapWithExactTwoMolecule) {
  const auto qp = qubit_pair(2.0);
  const auto c = pair_couplings(ArrayGeometry::linear(2), 1e-4);
  const auto pg = perturbative_ground_state(qp, c, 2);
  const Eigen::VectorXd exact = spectrum(build_hamiltonian(qp, c, 2), EigenRequest::lowest(1)).ground_state();
  const double ov = pg.state.dot(exact);
  EXPECT_GE(ov * ov, 1.0 - 1e-12);
}

TEST(Perturbative, BoundHoldsAtSixMolecules) {
  const auto qp = qubit_pair(2.0);
  const auto c = pair_couplings(ArrayGeometry::linear(6), 1e-3);
  const auto pg = perturbative_ground_state(qp, c, 6);
  const double p = p_not_all_zero(spectrum(build_hamiltonian(qp, c, 6), EigenRequest::lowest(1)).ground_state());
  EXPECT_LE(p, pg.bound);
  EXPECT_NEAR(pg.bound, 6 * std::pow(pg.omega * pg.vbar, 2), 1e-20);
}

TEST(Perturbative, DegenerateLevelsRejected) {
  QubitPair qp;
  qp.w0 = qp.w1 = 1.0;
  qp.xme = 0.5;
  const auto c = pair_couplings(ArrayGeometry::linear(2), 1e-3);
  EXPECT_EQ(code_of([&] { perturbative_ground_state(qp, c, 2); }), ErrorCode::perturbation_invalid);
}

TEST(Perturbative, PropertyBoundAndOverlapError) {
  oracle::Gen gen(51);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = gen.integer(2, 6);
    const double x = gen.uniform(0.5, 8.0);
    const double omega = std::pow(10.0, gen.uniform(-5.0, -3.0));
    const auto qp = qubit_pair(x);
    const auto c = pair_couplings(ArrayGeometry::linear(n), omega);
    const auto pg = perturbative_ground_state(qp, c, n);
    const Eigen::VectorXd g = spectrum(build_hamiltonian(qp, c, n), EigenRequest::lowest(1)).ground_state();
    EXPECT_LE(p_not_all_zero(g), pg.bound);
    const double ov = pg.state.dot(g);
    const double err = (g - ov * pg.state).squaredNorm();
    EXPECT_LE(err, 10.0 * std::pow(omega, 4)) << "n=" << n << " x=" << x << " omega=" << omega;
  }
}

TEST(FrequencyShift, ZeroCoupling) {
  EXPECT_NEAR(frequency_shift(qubit_pair(2.0), 0.0, std::numbers::pi / 2), 0.0, 1e-14);
}

TEST(FrequencyShift, LinearAndFirstOrder) {
  const auto qp = qubit_pair(2.0);
  const double a = std::numbers::pi / 2;
  const double s1 = frequency_shift(qp, 1e-4, a);
  const double s2 = frequency_shift(qp, 2e-4, a);
  EXPECT_NEAR(s2 / s1, 2.0, 1e-3);
  const double first = 1e-4 * angular_factor(a) * std::pow(qp.c1 - qp.c0, 2);
  EXPECT_GT(s1, 0.0);
  EXPECT_LE(std::abs(s1 - first) / first, 1e-2);
}

TEST(FrequencyShift, TiltedField) {
  const auto qp = qubit_pair(3.0);
  const double first = 1e-4 * std::abs(angular_factor(0.3)) * std::pow(qp.c1 - qp.c0, 2);
  EXPECT_NEAR(frequency_shift(qp, 1e-4, 0.3), first, 1e-2 * first);
}

TEST(ManybodyProperties, SpectrumInvariantUnderRelabeling) {
  oracle::Gen gen(61);
  const auto qp = qubit_pair(2.0);
  const auto base = ArrayGeometry::square(2, 3);
  const Spectrum ref = spectrum(build_hamiltonian(qp, pair_couplings(base, 1e-2), 6));
  for (int trial = 0; trial < 5; ++trial) {
    auto pos = base.positions;
    for (std::size_t k = pos.size() - 1; k > 0; --k) std::swap(pos[k], pos[std::size_t(gen.integer(0, int(k)))]);
    const auto g = ArrayGeometry::custom(pos, {0, 0, 1});
    const Spectrum s = spectrum(build_hamiltonian(qp, pair_couplings(g, 1e-2), 6));
    EXPECT_LT((s.eigenvalues - ref.eigenvalues).cwiseAbs().maxCoeff(), 1e-12);
  }
}
