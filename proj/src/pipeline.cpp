#include "dds/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dds/error.hpp"
#include "dds/io.hpp"

namespace dds {
namespace {

DDSConfig zscored(MetricKind f) {
  DDSConfig cfg;
  cfg.normalization.kind = NormKind::zscore;
  cfg.metric.kind = f;
  cfg.comparison = {Centering::unbiased, ScoreKind::pearson_full};
  return cfg;
}

Matrix explicit_kernel(const RowMatrix& x, CkaKernel kernel, std::optional<double> gamma) {
  if (kernel == CkaKernel::linear) return x * x.transpose();

  const Index n = x.rows();
  Matrix sq(n, n);
  std::vector<double> off;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      sq(i, j) = (x.row(i) - x.row(j)).squaredNorm();
      if (i < j) off.push_back(sq(i, j));
    }
  }
  if (!gamma) {
    std::sort(off.begin(), off.end());
    const double med = off[(off.size() - 1) / 2];
    if (!(med > 0.0)) fail(ErrorKind::numeric, "cka_direct: all rows are identical");
    gamma = 1.0 / (2.0 * med);
  }
  return (-*gamma * sq.array()).exp().matrix();
}

}  // namespace

std::string DDSConfig::digest() const {
  std::ostringstream s;
  s << "norm=" << to_string(normalization.kind);
  if (normalization.kind == NormKind::groupnorm) s << "(group_size=" << normalization.group_size << ")";
  if (normalization.kind != NormKind::identity && normalization.kind != NormKind::center) {
    s << "(eps=" << io::format_double(normalization.epsilon) << ")";
  }
  s << ";f=" << to_string(metric.kind);
  if (uses_bandwidth(metric.kind)) {
    s << "(gamma=" << (metric.bandwidth.median ? std::string("median") : io::format_double(metric.bandwidth.gamma))
      << ")";
  }
  s << ";center=" << to_string(comparison.centering) << ";g=" << to_string(comparison.score);
  return s.str();
}

void validate(const DDSConfig& cfg) {
  validate(cfg.normalization);
  validate(cfg.metric);
}

void check_alignment(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a == b) return;
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  std::vector<std::string> diff;
  std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(diff));
  std::ostringstream msg;
  if (diff.empty()) {
    msg << "image ids are in a different order";
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      if (a[i] != b[i]) {
        msg << " (position " << i << ": '" << a[i] << "' vs '" << b[i] << "')";
        break;
      }
    }
  } else {
    msg << "image ids differ; symmetric difference:";
    const std::size_t shown = std::min<std::size_t>(diff.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) msg << ' ' << diff[i];
    if (diff.size() > shown) msg << " ... (" << diff.size() << " total)";
  }
  fail(ErrorKind::alignment, msg.str());
}

DissimilarityMatrix prepare(const Features& x, const DDSConfig& cfg) {
  validate(cfg);
  return apply_centering(pairwise_matrix(apply_normalization(x, cfg.normalization), cfg.metric),
                         cfg.comparison.centering);
}

SimilarityScore compare_prepared(const DissimilarityMatrix& mx, const DissimilarityMatrix& my, const DDSConfig& cfg) {
  return {score(mx, my, cfg.comparison.score), cfg.digest()};
}

SimilarityScore dds(const Features& x, const Features& y, const DDSConfig& cfg) {
  check_alignment(image_ids(x), image_ids(y));
  return compare_prepared(prepare(x, cfg), prepare(y, cfg), cfg);
}

DDSConfig rsa_config() {
  DDSConfig cfg;
  cfg.normalization.kind = NormKind::center;
  cfg.metric.kind = MetricKind::pearson_dist;
  cfg.comparison = {Centering::none, ScoreKind::spearman_upper};
  return cfg;
}

DDSConfig cka_config(CkaKernel kernel) {
  DDSConfig cfg;
  cfg.normalization.kind = NormKind::identity;
  cfg.metric.kind = kernel == CkaKernel::linear ? MetricKind::linear_kernel : MetricKind::rbf_kernel;
  cfg.comparison = {Centering::double_centered, ScoreKind::cosine_full};
  return cfg;
}

SimilarityScore rsa(const Features& x, const Features& y) { return dds(x, y, rsa_config()); }

SimilarityScore cka(const Features& x, const Features& y, CkaKernel kernel) { return dds(x, y, cka_config(kernel)); }

double cka_direct(const Features& x, const Features& y, CkaKernel kernel, std::optional<double> gamma_x,
                  std::optional<double> gamma_y) {
  validate(x);
  validate(y);
  check_alignment(image_ids(x), image_ids(y));
  const FeatureMatrix fx = flatten(x);
  const FeatureMatrix fy = flatten(y);
  const Index n = fx.rows();

  const Matrix k = explicit_kernel(fx.data, kernel, gamma_x);
  const Matrix l = explicit_kernel(fy.data, kernel, gamma_y);
  const Matrix h = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  const Matrix kh = k * h;
  const Matrix lh = l * h;

  const double kl = (kh * lh).trace();
  const double kk = (kh * kh).trace();
  const double ll = (lh * lh).trace();
  // H K H vanishes (up to round-off) when every row is the same.
  constexpr double kDegenerate = 1e-24;
  if (kk <= kDegenerate * k.squaredNorm() || ll <= kDegenerate * l.squaredNorm()) {
    fail(ErrorKind::numeric, "cka_direct: centered kernel matrix is zero (constant features)");
  }
  return kl / std::sqrt(kk * ll);
}

const std::vector<std::pair<std::string, DDSConfig>>& shipped_presets() {
  static const std::vector<std::pair<std::string, DDSConfig>> presets = {
      {"rsa", rsa_config()},
      {"cka-linear", cka_config(CkaKernel::linear)},
      {"cka-rbf", cka_config(CkaKernel::rbf)},
      {"dds-pearson", zscored(MetricKind::pearson_dist)},
      {"dds-euclidean", zscored(MetricKind::euclidean)},
      {"dds-cosine", zscored(MetricKind::cosine_dist)},
      {"dds-linear", zscored(MetricKind::linear_kernel)},
      {"dds-laplacian", zscored(MetricKind::laplacian_kernel)},
      {"dds-rbf", zscored(MetricKind::rbf_kernel)},
  };
  return presets;
}

std::optional<DDSConfig> find_preset(std::string_view name) {
  for (const auto& [preset_name, cfg] : shipped_presets()) {
    if (preset_name == name) return cfg;
  }
  return std::nullopt;
}

}  // namespace dds
