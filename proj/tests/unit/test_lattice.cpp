#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "polarq/lattice.hpp"

using namespace polarq;

namespace {

const PairCoupling& find_pair(const std::vector<PairCoupling>& v, int i, int j) {
  for (const auto& c : v)
    if (c.i == i && c.j == j) return c;
  throw std::runtime_error("pair not found");
}

}  // namespace

TEST(Lattice, LinearThirdNeighbourScaling) {
  const double omega = 1e-3;
  const auto c = pair_couplings(ArrayGeometry::linear(3), omega);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(find_pair(c, 0, 2).omega, omega / 8);
  EXPECT_DOUBLE_EQ(find_pair(c, 0, 1).omega, omega);
}

TEST(Lattice, SquareDiagonalCoupling) {
  const auto c = pair_couplings(ArrayGeometry::square(3, 3), 1.0);
  EXPECT_EQ(c.size(), 36u);
  EXPECT_NEAR(find_pair(c, 0, 4).omega, 0.35355, 1e-5);
  EXPECT_NEAR(find_pair(c, 0, 4).omega, std::pow(2.0, -1.5), 1e-15);
  EXPECT_NEAR(find_pair(c, 0, 8).omega, std::pow(8.0, -1.5), 1e-15);
}

TEST(Lattice, PerpendicularFieldGivesUnitFactor) {
  const auto c = pair_couplings(ArrayGeometry::linear(2), 1e-3);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].alpha, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(angular_factor(c[0].alpha), 1.0, 1e-15);
  EXPECT_NEAR(c[0].strength(), 1e-3, 1e-18);
  for (const auto& p : pair_couplings(ArrayGeometry::square(3, 3), 1.0)) {
    EXPECT_NEAR(p.alpha, std::numbers::pi / 2, 1e-15);
  }
}

TEST(Lattice, AngularFactor) {
  EXPECT_NEAR(angular_factor(std::numbers::pi / 2), 1.0, 1e-15);
  EXPECT_NEAR(angular_factor(0.0), -2.0, 1e-15);
  EXPECT_NEAR(angular_factor(std::acos(1.0 / std::sqrt(3.0))), 0.0, 1e-15);
}

TEST(Lattice, CustomGeometryAngles) {
  // Field along the separation vector: alpha = 0.
  const auto g = ArrayGeometry::custom({{0, 0, 0}, {0, 0, 2}}, {0, 0, 5});
  const auto c = pair_couplings(g, 1.0);
  EXPECT_NEAR(c[0].alpha, 0.0, 1e-15);
  EXPECT_NEAR(c[0].omega, 1.0 / 8, 1e-15);
  EXPECT_NEAR(c[0].strength(), -2.0 / 8, 1e-15);
  const auto tilted = pair_couplings(ArrayGeometry::custom({{0, 0, 0}, {1, 0, 0}}, {1, 0, 1}), 1.0);
  EXPECT_NEAR(tilted[0].alpha, std::numbers::pi / 4, 1e-15);
}

TEST(Lattice, DuplicatePositionsRejected) {
  const auto g = ArrayGeometry::custom({{0, 0, 0}, {1, 0, 0}, {1, 0, 0}}, {0, 0, 1});
  try {
    pair_couplings(g, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_geometry);
  }
}

TEST(Lattice, InvalidInputs) {
  EXPECT_THROW(pair_couplings(ArrayGeometry::linear(2), -1.0), Error);
  EXPECT_THROW(ArrayGeometry::linear(0), Error);
  EXPECT_THROW(ArrayGeometry::square(0, 3), Error);
  EXPECT_THROW(ArrayGeometry::custom({{0, 0, 0}}, {0, 0, 0}), Error);
  EXPECT_THROW(ArrayGeometry::custom({}, {0, 0, 1}), Error);
}

TEST(Lattice, SingleSiteHasNoPairs) {
  EXPECT_TRUE(pair_couplings(ArrayGeometry::linear(1), 1.0).empty());
}

TEST(Lattice, NearestNeighbourFilter) {
  const auto lin = pair_couplings(ArrayGeometry::linear(5), 1.0, CouplingRange::nearest_neighbor);
  ASSERT_EQ(lin.size(), 4u);
  for (const auto& c : lin) EXPECT_EQ(c.j - c.i, 1);
  const auto sq = pair_couplings(ArrayGeometry::square(3, 3), 1.0, CouplingRange::nearest_neighbor);
  EXPECT_EQ(sq.size(), 12u);
}

TEST(LatticeProperties, LinearDecayIsInverseCube) {
  for (int n = 2; n <= 12; ++n) {
    for (const auto& c : pair_couplings(ArrayGeometry::linear(n), 0.7)) {
      const int k = c.j - c.i;
      EXPECT_DOUBLE_EQ(c.omega, 0.7 / (double(k) * k * k));
      EXPECT_GE(c.alpha, 0.0);
      EXPECT_LE(c.alpha, std::numbers::pi);
    }
  }
}

TEST(LatticeProperties, BuiltInDistancesAtLeastOne) {
  for (const auto& g : {ArrayGeometry::linear(7), ArrayGeometry::square(3, 4)}) {
    for (const auto& c : pair_couplings(g, 1.0)) EXPECT_LE(c.omega, 1.0 + 1e-15);
  }
}

TEST(LatticeProperties, RelabelingPreservesCouplingMultiset) {
  oracle::Gen gen(21);
  const auto base = ArrayGeometry::square(3, 3);
  auto multiset = [](const std::vector<PairCoupling>& v) {
    std::vector<std::pair<double, double>> m;
    for (const auto& c : v) m.emplace_back(c.omega, std::cos(c.alpha));
    std::sort(m.begin(), m.end());
    return m;
  };
  const auto ref = multiset(pair_couplings(base, 1.0));
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Eigen::Vector3d> pos = base.positions;
    for (std::size_t k = pos.size() - 1; k > 0; --k) {
      std::swap(pos[k], pos[std::size_t(gen.integer(0, int(k)))]);
    }
    const auto got = multiset(pair_couplings(ArrayGeometry::custom(pos, {0, 0, 1}), 1.0));
    ASSERT_EQ(got.size(), ref.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      EXPECT_NEAR(got[k].first, ref[k].first, 1e-14);
      EXPECT_NEAR(got[k].second, ref[k].second, 1e-14);
    }
  }
}
