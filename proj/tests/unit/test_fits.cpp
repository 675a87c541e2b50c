#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "polarq/entangle.hpp"
#include "polarq/fits.hpp"
#include "polarq/manybody.hpp"

using namespace polarq;

namespace {

double exact_impurity(int n, double x, double omega) {
  const auto g = ArrayGeometry::linear(n);
  const auto h = build_hamiltonian(qubit_pair(x), pair_couplings(g, omega), n);
  return p_not_all_zero(spectrum(h, EigenRequest::lowest(1)).ground_state());
}

double exact_pair_concurrence(double x, double omega) {
  const auto g = ArrayGeometry::linear(2);
  const auto h = build_hamiltonian(qubit_pair(x), pair_couplings(g, omega), 2);
  return concurrence(reduce(spectrum(h, EigenRequest::lowest(1)).ground_state(), 0, 1));
}

}  // namespace

TEST(FitTables, DefaultConstants) {
  const FitParamsF f;
  EXPECT_EQ(f.y0, 3.25724e-11);
  EXPECT_EQ(f.a, 8.89294e-10);
  EXPECT_EQ(f.xc, 0.78549);
  EXPECT_EQ(f.dx1, 0.28914);
  EXPECT_EQ(f.dx2, 1.50288);
  const FitParamsK k;
  EXPECT_EQ(k.a1, 0.01092);
  EXPECT_EQ(k.a2, 0.2195);
  EXPECT_EQ(k.x0, 0.9658);
  EXPECT_EQ(k.dx, 0.9743);
}

TEST(FOfX, Values) {
  EXPECT_NEAR(f_of_x(2.0), 3.03e-10, 0.01e-10);
  const FitParamsF p;
  EXPECT_NEAR(f_of_x(p.xc), p.y0 + p.a / 4, 1e-25);
  EXPECT_GT(f_of_x(1e-9), p.y0);
  EXPECT_LT(f_of_x(1e-9), p.y0 + p.a);
}

TEST(FOfX, ParametersOverride) {
  FitParamsF p;
  p.a = 0.0;
  EXPECT_EQ(f_of_x(2.0, p), p.y0);
}

TEST(PFit, HeadlineNumber) {
  const auto e = p_fit(1000, 2.0, 1e-4);
  EXPECT_NEAR(e.value, 3.0e-7, 0.05 * 3.0e-7);
  EXPECT_TRUE(e.in_window);
}

TEST(PFit, ZeroCouplingAndRatio) {
  EXPECT_EQ(p_fit(6, 2.0, 0.0).value, 0.0);
  EXPECT_DOUBLE_EQ(p_fit(6, 2.5, 1e-3).value / p_fit(4, 2.5, 1e-3).value, 2.0);
}

TEST(PFit, WindowFlags) {
  EXPECT_FALSE(p_fit(3, 2.0, 1e-4).in_window);
  EXPECT_FALSE(p_fit(5, 0.0, 1e-4).in_window);
  EXPECT_FALSE(p_fit(5, 9.0, 1e-4).in_window);
  EXPECT_FALSE(p_fit(5, 2.0, 0.05).in_window);
  EXPECT_TRUE(p_fit(4, 8.0, 1e-2).in_window);
  EXPECT_EQ(p_fit(2, 2.0, 1e-4).value, 0.0);
}

TEST(PFit, QuadraticInCouplingAffineInN) {
  for (double x : {0.5, 2.0, 6.0}) {
    const double base = p_fit(5, x, 1e-4).value;
    EXPECT_NEAR(p_fit(5, x, 3e-4).value, 9 * base, 1e-12 * base);
    const double d1 = p_fit(6, x, 1e-4).value - p_fit(5, x, 1e-4).value;
    const double d2 = p_fit(9, x, 1e-4).value - p_fit(8, x, 1e-4).value;
    EXPECT_NEAR(d1, d2, 1e-12 * d1);
  }
}

TEST(KOfX, Values) {
  EXPECT_NEAR(k_of_x(2.0), 0.0673, 1e-4);
  EXPECT_NEAR(k_of_x(1e3), 0.01092, 1e-15);
  EXPECT_NEAR(k_of_x(0.9658), 0.12067, 1e-12);
}

TEST(KOfX, StrictlyDecreasing) {
  double prev = k_of_x(0.0);
  for (int k = 1; k <= 200; ++k) {
    const double v = k_of_x(0.05 * k);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(ResidualReport, IdenticalInputs) {
  const std::vector<double> v{1.0, 2.0, 3.0};
  const auto r = residual_report(v, v);
  EXPECT_EQ(r.max_relative, 0.0);
  EXPECT_EQ(r.mean_relative, 0.0);
  for (double e : r.relative) EXPECT_EQ(e, 0.0);
}

TEST(ResidualReport, Statistics) {
  const std::vector<double> exact{1.0, 2.0, 4.0}, fitted{1.1, 1.8, 4.0};
  const auto r = residual_report(exact, fitted);
  EXPECT_NEAR(r.relative[0], 0.1, 1e-14);
  EXPECT_NEAR(r.relative[1], 0.1, 1e-14);
  EXPECT_NEAR(r.max_relative, 0.1, 1e-14);
  EXPECT_NEAR(r.mean_relative, 0.2 / 3, 1e-14);
}

TEST(ResidualReport, GridMismatch) {
  const std::vector<double> a{1.0, 2.0}, b{1.0};
  try {
    residual_report(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::grid_mismatch);
  }
}

TEST(ResidualReport, ImpurityFitAgainstExactDiagonalization) {
  std::vector<double> exact, fitted;
  for (int n = 4; n <= 8; ++n)
    for (double x : {2.0, 3.0, 4.9})
      for (double omega : {1e-4, 1e-3}) {
        exact.push_back(exact_impurity(n, x, omega));
        fitted.push_back(p_fit(n, x, omega).value);
      }
  EXPECT_LE(residual_report(exact, fitted).max_relative, 0.08);
}

TEST(ResidualReport, ConcurrenceFitAtLowAndModerateField) {
  // x = 4 is covered, and reported, by the acceptance suite.
  for (double x : {1.0, 2.0}) {
    const double c = exact_pair_concurrence(x, 1e-3);
    EXPECT_NEAR(c / (k_of_x(x) * 1e-3), 1.0, 0.10) << "x=" << x;
  }
}
