#include "dds/types.hpp"

#include <cmath>
#include <unordered_set>

#include "dds/error.hpp"

namespace dds {
namespace {

void validate_common(const RowMatrix& data, const std::vector<std::string>& ids, const std::string& what) {
  if (data.rows() < 2) fail(ErrorKind::validation, what + ": need at least 2 images, got " + std::to_string(data.rows()));
  if (data.cols() < 1) fail(ErrorKind::validation, what + ": need at least 1 feature");
  if (static_cast<Index>(ids.size()) != data.rows()) {
    fail(ErrorKind::validation, what + ": " + std::to_string(ids.size()) + " image ids for " +
                                    std::to_string(data.rows()) + " rows");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) fail(ErrorKind::validation, what + ": duplicate image id '" + id + "'");
  }
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) {
      if (!std::isfinite(data(i, j))) {
        fail(ErrorKind::validation, what + ": non-finite value for image '" + ids[i] + "' at feature " + std::to_string(j));
      }
    }
  }
}

}  // namespace

void validate(const FeatureMatrix& x) { validate_common(x.data, x.image_ids, "feature matrix"); }

void validate(const FeatureMap& x) {
  if (x.channels < 1 || x.height < 1 || x.width < 1) fail(ErrorKind::validation, "feature map: c, h, w must be >= 1");
  if (x.data.cols() != x.channels * x.height * x.width) {
    fail(ErrorKind::validation, "feature map: flat width does not equal c*h*w");
  }
  validate_common(x.data, x.image_ids, "feature map");
}

void validate(const Features& x) {
  std::visit([](const auto& v) { validate(v); }, x);
}

FeatureMap make_feature_map(RowMatrix flat, Index channels, Index height, Index width,
                            std::vector<std::string> image_ids, std::string source) {
  FeatureMap m;
  m.data = std::move(flat);
  m.channels = channels;
  m.height = height;
  m.width = width;
  m.image_ids = std::move(image_ids);
  m.source = std::move(source);
  return m;
}

FeatureMatrix flatten(const FeatureMap& x) { return FeatureMatrix{x.data, x.image_ids, x.source}; }

FeatureMatrix flatten(const Features& x) {
  if (const auto* m = std::get_if<FeatureMatrix>(&x)) return *m;
  return flatten(std::get<FeatureMap>(x));
}

const std::vector<std::string>& image_ids(const Features& x) {
  return std::visit([](const auto& v) -> const std::vector<std::string>& { return v.image_ids; }, x);
}

const std::string& source(const Features& x) {
  return std::visit([](const auto& v) -> const std::string& { return v.source; }, x);
}

Index image_count(const Features& x) {
  return std::visit([](const auto& v) { return v.data.rows(); }, x);
}

Features select_images(const Features& x, std::span<const Index> rows, std::vector<std::string> ids) {
  return std::visit(
      [&](const auto& v) -> Features {
        auto out = v;
        out.data.resize(static_cast<Index>(rows.size()), v.data.cols());
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (rows[r] < 0 || rows[r] >= v.data.rows()) fail(ErrorKind::validation, "image index out of range");
          out.data.row(static_cast<Index>(r)) = v.data.row(rows[r]);
        }
        out.image_ids = std::move(ids);
        return out;
      },
      x);
}

std::vector<std::string> default_image_ids(Index n) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

}  // namespace dds
