#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dds/evalrank.hpp"

namespace dds {

/// Declarative run document. Every key is optional; unknown keys are rejected.
///
///   {
///     "preset": "dds-laplacian",            // or the three blocks below
///     "normalization": {"kind": "zscore", "group_size": 32, "epsilon": 1e-8},
///     "metric": {"kind": "laplacian_kernel", "bandwidth": "median" | 0.5},
///     "comparison": {"centering": "unbiased", "score": "pearson_full"},
///     "inputs": ["a.npy", ...], "groundtruth": "gt.csv",
///     "seed": 0, "sample_size": 200, "n_resamples": 100,
///     "exclude_self": true, "out": "results/",
///     "counts": [10, 20], "k_max": 16,
///     "grid": {"normalizations": [...], "metrics": [...]}
///   }
///
/// A preset is applied first; explicit blocks then override its parts.
struct RunConfig {
  DDSConfig dds = default_config();
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> groundtruth;
  std::uint64_t seed = 0;
  int sample_size = 200;
  int n_resamples = 100;
  bool exclude_self = true;
  std::optional<std::filesystem::path> out;
  std::vector<int> counts;
  std::optional<int> k_max;
  std::vector<NormKind> grid_normalizations;
  std::vector<MetricKind> grid_metrics;

  /// zscore + laplacian (median) + unbiased centering + Pearson.
  static DDSConfig default_config();
};

/// Throws a configuration Error on unknown keys, wrong types or invalid values.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

/// Only the DDS part; accepts the same keys as the corresponding RunConfig fields.
DDSConfig parse_dds_config(const nlohmann::json& doc);
nlohmann::json to_json(const DDSConfig& cfg);

nlohmann::json to_json(const RankingReport& report);
nlohmann::json to_json(const AffinityMatrix& aff);

}  // namespace dds
