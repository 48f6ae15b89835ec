#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dds {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
/// Row-major storage: one image per contiguous row.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n x d activations, one row per image.
struct FeatureMatrix {
  RowMatrix data;
  std::vector<std::string> image_ids;
  std::string source;

  Index rows() const { return data.rows(); }
  Index cols() const { return data.cols(); }
  std::span<const double> row(Index i) const {
    return {data.data() + i * data.cols(), static_cast<std::size_t>(data.cols())};
  }
};

/// n x c x h x w convolutional activations. Stored flattened as n x (c*h*w),
/// channel-major and row-major over the spatial grid (NCHW order).
struct FeatureMap {
  RowMatrix data;
  Index channels = 0;
  Index height = 0;
  Index width = 0;
  std::vector<std::string> image_ids;
  std::string source;

  Index rows() const { return data.rows(); }
  Index spatial() const { return height * width; }
};

using Features = std::variant<FeatureMatrix, FeatureMap>;

void validate(const FeatureMatrix& x);
void validate(const FeatureMap& x);
void validate(const Features& x);

/// Reshape an n x c x h x w tensor from NCHW-ordered values.
FeatureMap make_feature_map(RowMatrix flat, Index channels, Index height, Index width,
                            std::vector<std::string> image_ids, std::string source = {});

FeatureMatrix flatten(const FeatureMap& x);
FeatureMatrix flatten(const Features& x);

const std::vector<std::string>& image_ids(const Features& x);
const std::string& source(const Features& x);
Index image_count(const Features& x);

/// Keep the listed rows (repeats allowed) and relabel them with `ids`.
Features select_images(const Features& x, std::span<const Index> rows,
                       std::vector<std::string> ids);

/// ids "0", "1", ... for quick in-memory construction.
std::vector<std::string> default_image_ids(Index n);

}  // namespace dds
