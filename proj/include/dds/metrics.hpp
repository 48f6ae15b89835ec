#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dds/types.hpp"

namespace dds {

enum class MetricKind { pearson_dist, euclidean, cosine_dist, linear_kernel, laplacian_kernel, rbf_kernel };

std::string_view to_string(MetricKind kind);
MetricKind parse_metric_kind(std::string_view name);
bool is_kernel(MetricKind kind);
/// Laplacian and RBF take a bandwidth.
bool uses_bandwidth(MetricKind kind);

/// Kernel bandwidth: either a fixed gamma or the median heuristic.
struct Bandwidth {
  bool median = true;
  double gamma = 0.0;

  static Bandwidth median_heuristic() { return {true, 0.0}; }
  static Bandwidth fixed(double gamma) { return {false, gamma}; }
};

struct MetricSpec {
  MetricKind kind = MetricKind::pearson_dist;
  Bandwidth bandwidth = Bandwidth::median_heuristic();
};

void validate(const MetricSpec& spec);

/// Pairwise (dis)similarity matrix M(i, j) = f(x_i, x_j).
struct DissimilarityMatrix {
  Matrix data;
  MetricKind kind = MetricKind::pearson_dist;
  std::vector<std::string> image_ids;
  double gamma = 0.0;  ///< resolved bandwidth, 0 for kinds without one

  Index size() const { return data.rows(); }
};

/// f(xi, xj) for one pair. `gamma` is ignored by kinds without a bandwidth.
double scalar_f(std::span<const double> xi, std::span<const double> xj, MetricKind kind,
                double gamma = 0.0);

/// Laplacian: 1 / median pairwise L1 distance.
/// RBF: 1 / (2 * median pairwise squared L2 distance).
/// The median of an even-length list is its lower-middle element.
double median_bandwidth(const FeatureMatrix& xhat, MetricKind kind);

/// gamma used for `spec` on `xhat` (0 for kinds without a bandwidth).
double resolve_bandwidth(const FeatureMatrix& xhat, const MetricSpec& spec);

DissimilarityMatrix pairwise_matrix(const FeatureMatrix& xhat, const MetricSpec& spec);

}  // namespace dds
