#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dds/compare.hpp"
#include "dds/metrics.hpp"
#include "dds/norms.hpp"

namespace dds {

/// Full (Q, D, f, g) pipeline.
struct DDSConfig {
  NormalizationSpec normalization;
  MetricSpec metric;
  ComparisonSpec comparison;

  /// Canonical one-line description, stable across runs.
  std::string digest() const;
};

void validate(const DDSConfig& cfg);

/// Throws an alignment Error listing the symmetric difference (or the first
/// order mismatch) when the two id lists differ.
void check_alignment(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Normalize, build the pairwise matrix (bandwidth resolved from this side's
/// normalized features) and apply the configured centering.
DissimilarityMatrix prepare(const Features& x, const DDSConfig& cfg);

/// Score two prepared matrices.
SimilarityScore compare_prepared(const DissimilarityMatrix& mx, const DissimilarityMatrix& my,
                                 const DDSConfig& cfg);

SimilarityScore dds(const Features& x, const Features& y, const DDSConfig& cfg);

enum class CkaKernel { linear, rbf };

/// Q = I, D = column centering, f = Pearson distance, no centering,
/// g = Spearman over the upper triangle.
DDSConfig rsa_config();
/// Q = D = I, f = linear or RBF kernel, double centering, g = cosine.
DDSConfig cka_config(CkaKernel kernel);

SimilarityScore rsa(const Features& x, const Features& y);
SimilarityScore cka(const Features& x, const Features& y, CkaKernel kernel);

/// tr(KHLH) / sqrt(tr(KHKH) tr(LHLH)) evaluated literally with explicit H.
/// RBF bandwidths follow the median heuristic per side unless given.
double cka_direct(const Features& x, const Features& y, CkaKernel kernel,
                  std::optional<double> gamma_x = std::nullopt,
                  std::optional<double> gamma_y = std::nullopt);

/// Named configurations shipped with the tool, in a fixed order.
const std::vector<std::pair<std::string, DDSConfig>>& shipped_presets();
std::optional<DDSConfig> find_preset(std::string_view name);

}  // namespace dds
