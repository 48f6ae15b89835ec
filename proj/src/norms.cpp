#include "dds/norms.hpp"

#include <array>
#include <cmath>
#include <string>

#include "dds/error.hpp"

namespace dds {
namespace {

constexpr std::array<std::string_view, 7> kNormNames = {"identity",     "center",    "zscore",   "batchnorm",
                                                         "instancenorm", "layernorm", "groupnorm"};

struct Moments {
  double mean;
  double std;
};

// Fixed ascending reduction order over the visited elements.
template <typename Visit>
Moments moments(Index count, Visit&& at) {
  double sum = 0.0;
  for (Index k = 0; k < count; ++k) sum += at(k);
  const double mu = sum / static_cast<double>(count);
  double ss = 0.0;
  for (Index k = 0; k < count; ++k) {
    const double d = at(k) - mu;
    ss += d * d;
  }
  return {mu, std::sqrt(ss / static_cast<double>(count))};
}

// Scales one statistic's elements in place; zero-variance statistics map to 0.
template <typename Ref>
void standardize(Index count, Ref&& ref, const Moments& m, double epsilon) {
  if (m.std < epsilon) {
    for (Index k = 0; k < count; ++k) ref(k) = 0.0;
    return;
  }
  for (Index k = 0; k < count; ++k) ref(k) = (ref(k) - m.mean) / m.std;
}

FeatureMatrix column_transform(FeatureMatrix x, bool scale, double epsilon) {
  const Index n = x.rows();
  for (Index j = 0; j < x.cols(); ++j) {
    auto col = [&](Index i) -> double& { return x.data(i, j); };
    const Moments m = moments(n, col);
    if (scale) {
      standardize(n, col, m, epsilon);
    } else {
      for (Index i = 0; i < n; ++i) x.data(i, j) -= m.mean;
    }
  }
  return x;
}

FeatureMatrix batch_norm(const FeatureMap& x, double epsilon) {
  FeatureMatrix out = flatten(x);
  const Index n = x.rows();
  const Index hw = x.spatial();
  for (Index c = 0; c < x.channels; ++c) {
    // element k walks images first-major, then spatial positions
    auto at = [&](Index k) -> double& { return out.data(k / hw, c * hw + k % hw); };
    standardize(n * hw, at, moments(n * hw, at), epsilon);
  }
  return out;
}

FeatureMatrix group_norm(const FeatureMap& x, Index group_size, double epsilon) {
  if (group_size < 1 || x.channels % group_size != 0) {
    fail(ErrorKind::configuration, "groupnorm: group_size " + std::to_string(group_size) +
                                       " does not divide channel count " + std::to_string(x.channels));
  }
  FeatureMatrix out = flatten(x);
  const Index span = group_size * x.spatial();
  const Index groups = x.channels / group_size;
  for (Index i = 0; i < x.rows(); ++i) {
    double* row = out.data.data() + i * out.data.cols();
    for (Index g = 0; g < groups; ++g) {
      double* slice = row + g * span;
      auto at = [slice](Index k) -> double& { return slice[k]; };
      standardize(span, at, moments(span, at), epsilon);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(NormKind kind) { return kNormNames[static_cast<std::size_t>(kind)]; }

NormKind parse_norm_kind(std::string_view name) {
  for (std::size_t i = 0; i < kNormNames.size(); ++i) {
    if (kNormNames[i] == name) return static_cast<NormKind>(i);
  }
  fail(ErrorKind::configuration, "unknown normalization '" + std::string(name) + "'");
}

bool needs_feature_map(NormKind kind) {
  switch (kind) {
    case NormKind::identity:
    case NormKind::center:
    case NormKind::zscore:
      return false;
    default:
      return true;
  }
}

void validate(const NormalizationSpec& spec) {
  if (!(spec.epsilon > 0.0)) fail(ErrorKind::configuration, "normalization epsilon must be > 0");
  if (spec.kind == NormKind::groupnorm && spec.group_size < 1) {
    fail(ErrorKind::configuration, "groupnorm group_size must be >= 1");
  }
}

FeatureMatrix apply_normalization(const Features& x, const NormalizationSpec& spec) {
  validate(spec);
  validate(x);

  if (!needs_feature_map(spec.kind)) {
    FeatureMatrix m = flatten(x);
    switch (spec.kind) {
      case NormKind::center:
        return column_transform(std::move(m), false, spec.epsilon);
      case NormKind::zscore:
        return column_transform(std::move(m), true, spec.epsilon);
      default:
        return m;
    }
  }

  const auto* map = std::get_if<FeatureMap>(&x);
  if (map == nullptr) {
    fail(ErrorKind::configuration,
         std::string(to_string(spec.kind)) + " needs an n x c x h x w feature map, got an n x d matrix");
  }
  switch (spec.kind) {
    case NormKind::batchnorm:
      return batch_norm(*map, spec.epsilon);
    case NormKind::layernorm:
      return group_norm(*map, map->channels, spec.epsilon);
    case NormKind::instancenorm:
      return group_norm(*map, 1, spec.epsilon);
    default:
      return group_norm(*map, spec.group_size, spec.epsilon);
  }
}

}  // namespace dds
