#include "fixtures.hpp"

#include <Eigen/QR>
#include <random>
#include <unistd.h>

namespace fixture {

RowMatrix gaussian(dds::Index rows, dds::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RowMatrix m(rows, cols);
  for (dds::Index i = 0; i < rows; ++i)
    for (dds::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

FeatureMatrix features(RowMatrix data, const std::string& source) {
  const auto n = data.rows();
  return FeatureMatrix{std::move(data), dds::default_image_ids(n), source};
}

FeatureMatrix random_features(dds::Index n, dds::Index d, std::uint64_t seed) {
  return features(gaussian(n, d, seed));
}

FeatureMap random_map(dds::Index n, dds::Index c, dds::Index h, dds::Index w, std::uint64_t seed) {
  return dds::make_feature_map(gaussian(n, c * h * w, seed), c, h, w, dds::default_image_ids(n));
}

dds::Matrix random_orthogonal(dds::Index d, std::uint64_t seed) {
  const dds::Matrix g = gaussian(d, d, seed);
  Eigen::HouseholderQR<dds::Matrix> qr(g);
  return qr.householderQ() * dds::Matrix::Identity(d, d);
}

PlantedZoo planted_zoo(dds::Index n, dds::Index d, const std::vector<double>& eps, std::uint64_t seed) {
  PlantedZoo zoo;
  zoo.base = features(gaussian(n, d, seed), "base");
  zoo.eps = eps;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    RowMatrix y = zoo.base.data + eps[k] * gaussian(n, d, seed * 1000 + k + 1);
    const std::string id = "m" + std::to_string(k);
    zoo.models.entries.push_back({id, features(std::move(y), id)});
  }
  return zoo;
}

dds::GroundTruth planted_groundtruth(const PlantedZoo& zoo) {
  dds::GroundTruth gt;
  gt.kind = "affinity";
  gt.source_ids = zoo.models.ids();
  gt.target_ids = zoo.models.ids();
  const auto m = static_cast<dds::Index>(zoo.eps.size());
  gt.data.resize(m, m);
  for (dds::Index i = 0; i < m; ++i)
    for (dds::Index j = 0; j < m; ++j) gt.data(i, j) = -zoo.eps[static_cast<std::size_t>(i)];
  return gt;
}

std::filesystem::path temp_dir(const std::string& tag) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() /
             ("dds_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixture
