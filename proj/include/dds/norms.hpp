#pragma once

#include <string_view>

#include "dds/types.hpp"

namespace dds {

enum class NormKind { identity, center, zscore, batchnorm, instancenorm, layernorm, groupnorm };

/// Observation weighting D and feature weighting Q of the duality diagram.
///
/// identity, center and zscore act on the n x d matrix (a feature map is
/// flattened first). The remaining kinds need a FeatureMap and follow the
/// reshaping scheme of the deep-learning normalizations:
///   batchnorm     statistics per channel over (n, h, w)
///   groupnorm     statistics per (image, group of `group_size` channels)
///   layernorm     groupnorm with group_size = c
///   instancenorm  groupnorm with group_size = 1
/// Standard deviations are population deviations; a statistic whose std is
/// below `epsilon` maps its elements to zero.
struct NormalizationSpec {
  NormKind kind = NormKind::identity;
  int group_size = 32;  ///< channels per group, groupnorm only
  double epsilon = 1e-8;
};

std::string_view to_string(NormKind kind);
NormKind parse_norm_kind(std::string_view name);
bool needs_feature_map(NormKind kind);

void validate(const NormalizationSpec& spec);

/// X_hat = D X Q. Row order and image ids are preserved.
FeatureMatrix apply_normalization(const Features& x, const NormalizationSpec& spec);

}  // namespace dds
