#include <gtest/gtest.h>

#include <cmath>

#include "dds/error.hpp"
#include "dds/metrics.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dds;

namespace {

constexpr MetricKind kAll[] = {MetricKind::pearson_dist,  MetricKind::euclidean,        MetricKind::cosine_dist,
                               MetricKind::linear_kernel, MetricKind::laplacian_kernel, MetricKind::rbf_kernel};

FeatureMatrix rows(std::initializer_list<std::initializer_list<double>> values) {
  const auto n = static_cast<Index>(values.size());
  const auto d = static_cast<Index>(values.begin()->size());
  RowMatrix m(n, d);
  Index i = 0;
  for (const auto& r : values) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return fixture::features(m);
}

MetricSpec with_gamma(MetricKind kind, double gamma) { return {kind, Bandwidth::fixed(gamma)}; }

}  // namespace

TEST(Metrics, EuclideanThreeFourFive) {
  const auto m = pairwise_matrix(rows({{0, 0}, {3, 4}}), {MetricKind::euclidean});
  EXPECT_EQ(m.data(0, 1), 5.0);
  EXPECT_EQ(m.data(1, 0), 5.0);
  EXPECT_EQ(m.data(0, 0), 0.0);
}

TEST(Metrics, CosineOfOrthogonalRows) {
  const auto m = pairwise_matrix(rows({{1, 0}, {0, 1}}), {MetricKind::cosine_dist});
  EXPECT_EQ(m.data(0, 1), 1.0);
  EXPECT_EQ(m.data(0, 0), 0.0);
}

TEST(Metrics, PearsonDistanceMatchesReference) {
  const auto m = pairwise_matrix(rows({{1, 2, 3}, {1, 3, 2}}), {MetricKind::pearson_dist});
  const double rho = oracle::pearson({1, 2, 3}, {1, 3, 2});
  EXPECT_NEAR(rho, 0.5, 1e-15);
  EXPECT_NEAR(m.data(0, 1), 1.0 - rho, 1e-15);
  EXPECT_NEAR(m.data(0, 1), 0.5, 1e-15);
}

TEST(Metrics, LaplacianOfUnitDistance) {
  const auto m = pairwise_matrix(rows({{0}, {1}}), with_gamma(MetricKind::laplacian_kernel, 1.0));
  EXPECT_NEAR(m.data(0, 1), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(m.data(0, 1), 0.367879, 1e-6);
  EXPECT_EQ(m.data(0, 0), 1.0);
}

TEST(Metrics, ScalarFormulas) {
  const std::vector<double> a{1, 2}, b{3, 4};
  EXPECT_EQ(scalar_f(a, b, MetricKind::linear_kernel), 11.0);
  EXPECT_NEAR(scalar_f(a, b, MetricKind::rbf_kernel, 0.5), std::exp(-0.5 * 8.0), 1e-15);
  EXPECT_NEAR(scalar_f(a, b, MetricKind::laplacian_kernel, 0.25), std::exp(-0.25 * 4.0), 1e-15);
  EXPECT_NEAR(scalar_f(a, b, MetricKind::cosine_dist), 1.0 - 11.0 / std::sqrt(5.0 * 25.0), 1e-15);
  EXPECT_NEAR(scalar_f(a, b, MetricKind::euclidean), std::sqrt(8.0), 1e-15);
  EXPECT_EQ(scalar_f(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}, MetricKind::pearson_dist), 0.0);
}

TEST(Metrics, IdenticalVectorsGiveIdentityValues) {
  const auto x = fixture::gaussian(1, 9, 5);
  const std::span<const double> v(x.data(), 9);
  for (auto kind : kAll) {
    const double f = scalar_f(v, v, kind, 0.7);
    if (kind == MetricKind::linear_kernel) {
      EXPECT_NEAR(f, x.squaredNorm(), 1e-12);
    } else if (is_kernel(kind)) {
      EXPECT_EQ(f, 1.0) << to_string(kind);
    } else {
      EXPECT_EQ(f, 0.0) << to_string(kind);
    }
  }
}

TEST(Metrics, MedianBandwidthRule) {
  // all pairwise L1 distances are 2
  EXPECT_EQ(median_bandwidth(rows({{0, 0}, {1, 1}, {2, 0}}), MetricKind::laplacian_kernel), 0.5);
  // L1 distances {1, 1, 2}, median 1
  EXPECT_EQ(median_bandwidth(rows({{0}, {1}, {2}}), MetricKind::laplacian_kernel), 1.0);
  // squared distance 4 -> 1 / (2 * 4)
  EXPECT_EQ(median_bandwidth(rows({{0}, {2}}), MetricKind::rbf_kernel), 0.125);
  // L1 distances {1,3,7,2,6,4}: even count, lower-middle element is 3
  EXPECT_EQ(median_bandwidth(rows({{0}, {1}, {3}, {7}}), MetricKind::laplacian_kernel), 1.0 / 3.0);
}

TEST(Metrics, MedianBandwidthOfIdenticalRowsFails) {
  try {
    median_bandwidth(rows({{1, 2}, {1, 2}, {1, 2}}), MetricKind::rbf_kernel);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numeric);
  }
}

TEST(Metrics, DegenerateRowsNameTheImage) {
  auto x = rows({{1, 2, 3}, {4, 4, 4}, {0, 1, 0}});
  x.image_ids = {"cat.png", "dog.png", "owl.png"};
  try {
    pairwise_matrix(x, {MetricKind::pearson_dist});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numeric);
    EXPECT_NE(std::string(e.what()).find("dog.png"), std::string::npos);
  }
  x.data.row(2).setZero();
  try {
    pairwise_matrix(x, {MetricKind::cosine_dist});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("owl.png"), std::string::npos);
  }
  EXPECT_THROW(scalar_f(std::vector<double>{1, 2}, std::vector<double>{1}, MetricKind::euclidean), Error);
  EXPECT_THROW(pairwise_matrix(x, with_gamma(MetricKind::rbf_kernel, -1.0)), Error);
}

TEST(Metrics, SymmetryAndDiagonalOnRandomInputs) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto x = fixture::random_features(6 + static_cast<Index>(seed % 7), 2 + static_cast<Index>(seed % 11), seed);
    for (auto kind : kAll) {
      const auto m = pairwise_matrix(x, {kind});
      ASSERT_EQ(m.data, m.data.transpose()) << to_string(kind);
      for (Index i = 0; i < m.size(); ++i) {
        if (kind == MetricKind::linear_kernel) continue;
        EXPECT_EQ(m.data(i, i), is_kernel(kind) ? 1.0 : 0.0) << to_string(kind);
      }
      if (kind == MetricKind::linear_kernel) continue;
      const double lo = m.data.minCoeff(), hi = m.data.maxCoeff();
      if (kind == MetricKind::pearson_dist || kind == MetricKind::cosine_dist) {
        EXPECT_GE(lo, 0.0);
        EXPECT_LE(hi, 2.0);
      } else if (kind == MetricKind::euclidean) {
        EXPECT_GE(lo, 0.0);
      } else {
        EXPECT_GT(lo, 0.0);
        EXPECT_LE(hi, 1.0);
      }
    }
  }
}

TEST(Metrics, PearsonInvariantToRowAffineMaps) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto x = fixture::random_features(8, 12, seed);
    const auto base = pairwise_matrix(x, {MetricKind::pearson_dist});
    const auto ab = fixture::gaussian(8, 2, seed + 500);
    for (Index i = 0; i < 8; ++i) x.data.row(i) = (x.data.row(i) * (0.1 + std::abs(ab(i, 0)) * 5)).array() + ab(i, 1) * 10;
    const auto moved = pairwise_matrix(x, {MetricKind::pearson_dist});
    EXPECT_LT((base.data - moved.data).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Metrics, EuclideanTriangleInequality) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = pairwise_matrix(fixture::random_features(10, 5, seed), {MetricKind::euclidean});
    for (Index i = 0; i < 10; ++i)
      for (Index j = 0; j < 10; ++j)
        for (Index k = 0; k < 10; ++k) EXPECT_LE(m.data(i, k), m.data(i, j) + m.data(j, k) + 1e-9);
  }
}

TEST(Metrics, KernelsDecreaseWithBandwidth) {
  const auto x = fixture::random_features(5, 4, 77);
  for (auto kind : {MetricKind::laplacian_kernel, MetricKind::rbf_kernel}) {
    const auto lo = pairwise_matrix(x, with_gamma(kind, 0.05));
    const auto hi = pairwise_matrix(x, with_gamma(kind, 0.2));
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 5; ++j)
        if (i != j) EXPECT_LT(hi.data(i, j), lo.data(i, j));
  }
}

TEST(Metrics, PairwiseEqualsDoubleLoopOverScalarF) {
  const auto x = fixture::random_features(12, 7, 8);
  for (auto kind : kAll) {
    const MetricSpec s{kind};
    const auto m = pairwise_matrix(x, s);
    const double gamma = resolve_bandwidth(x, s);
    EXPECT_EQ(m.gamma, gamma);
    for (Index i = 0; i < 12; ++i)
      for (Index j = 0; j < 12; ++j) ASSERT_EQ(m.data(i, j), scalar_f(x.row(i), x.row(j), kind, gamma));
  }
}
