#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dds/evalrank.hpp"

namespace fixture {

using dds::FeatureMap;
using dds::FeatureMatrix;
using dds::RowMatrix;

/// Standard normal entries from a seeded mt19937_64.
RowMatrix gaussian(dds::Index rows, dds::Index cols, std::uint64_t seed);

FeatureMatrix features(RowMatrix data, const std::string& source = {});
FeatureMatrix random_features(dds::Index n, dds::Index d, std::uint64_t seed);
FeatureMap random_map(dds::Index n, dds::Index c, dds::Index h, dds::Index w, std::uint64_t seed);

/// Random orthogonal d x d matrix (QR of a Gaussian matrix).
dds::Matrix random_orthogonal(dds::Index d, std::uint64_t seed);

/// Planted zoo: model k is base + eps[k] * noise_k with independent noise per
/// model. Model ids are "m0", "m1", ... in eps order.
struct PlantedZoo {
  FeatureMatrix base;
  dds::ModelSet models;
  std::vector<double> eps;
};
PlantedZoo planted_zoo(dds::Index n, dds::Index d, const std::vector<double>& eps, std::uint64_t seed);

/// Groundtruth where every source's transfer performance is -eps (lower noise
/// transfers better), identical for every target.
dds::GroundTruth planted_groundtruth(const PlantedZoo& zoo);

/// Fresh, empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace fixture
