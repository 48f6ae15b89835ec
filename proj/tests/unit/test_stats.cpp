#include <gtest/gtest.h>

#include <cmath>

#include "dds/error.hpp"
#include "dds/stats.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using dds::stats::average_ranks;
using dds::stats::pearson;
using dds::stats::spearman;

TEST(Stats, AverageRanksSplitTies) {
  const std::vector<double> v{10, 20, 20, 5, 20};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{2, 4, 4, 1, 4}));
}

TEST(Stats, RanksMatchCountingOracle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = fixture::gaussian(1, 30, seed);
    std::vector<double> v(g.data(), g.data() + g.size());
    for (auto& x : v) x = std::round(x * 2.0);  // plenty of ties
    EXPECT_EQ(average_ranks(v), oracle::counting_ranks(v));
  }
}

TEST(Stats, SpearmanOfHandBuiltTriangles) {
  // ranks equal the values; sum d^2 = 4, so rho = 1 - 6*4/(6*35) = 31/35
  const std::vector<double> a{1, 2, 3, 4, 5, 6};
  const std::vector<double> b{1, 3, 2, 4, 6, 5};
  EXPECT_NEAR(oracle::spearman(a, b), 31.0 / 35.0, 1e-15);
  EXPECT_NEAR(spearman(a, b), 31.0 / 35.0, 1e-15);
}

TEST(Stats, SpearmanWithTiesMatchesOracle) {
  const std::vector<double> a{17, 86, 60, 77, 47, 3, 70, 47, 88, 92};
  const std::vector<double> b{70, 29, 85, 61, 80, 34, 60, 31, 73, 66};
  EXPECT_NEAR(spearman(a, b), oracle::spearman(a, b), 1e-14);
}

TEST(Stats, PearsonIsExactlySymmetric) {
  const auto g = fixture::gaussian(2, 40, 3);
  std::vector<double> a(g.row(0).data(), g.row(0).data() + 40);
  std::vector<double> b(g.row(1).data(), g.row(1).data() + 40);
  EXPECT_EQ(pearson(a, b), pearson(b, a));
  EXPECT_EQ(pearson(a, a), 1.0);
}

TEST(Stats, ZeroVarianceIsNumericError) {
  const std::vector<double> a{1, 1, 1};
  const std::vector<double> b{1, 2, 3};
  try {
    pearson(a, b);
    FAIL();
  } catch (const dds::Error& e) {
    EXPECT_EQ(e.kind(), dds::ErrorKind::numeric);
  }
}
