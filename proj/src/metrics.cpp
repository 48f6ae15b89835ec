#include "dds/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dds/error.hpp"
#include "dds/parallel.hpp"

namespace dds {
namespace {

constexpr std::array<std::string_view, 6> kMetricNames = {"pearson_dist",  "euclidean",        "cosine_dist",
                                                          "linear_kernel", "laplacian_kernel", "rbf_kernel"};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double row_variance_sum(std::span<const double> a) {
  double mu = 0.0;
  for (double v : a) mu += v;
  mu /= static_cast<double>(a.size());
  double ss = 0.0;
  for (double v : a) ss += (v - mu) * (v - mu);
  return ss;
}

double pearson_distance(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double da = a[k] - ma;
    const double db = b[k] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) fail(ErrorKind::numeric, "pearson_dist: zero-variance feature row");
  return 1.0 - std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  const double aa = dot(a, a);
  const double bb = dot(b, b);
  if (aa == 0.0 || bb == 0.0) fail(ErrorKind::numeric, "cosine_dist: zero feature row");
  return 1.0 - std::clamp(dot(a, b) / std::sqrt(aa * bb), -1.0, 1.0);
}

double lower_median(std::vector<double> values) {
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

}  // namespace

std::string_view to_string(MetricKind kind) { return kMetricNames[static_cast<std::size_t>(kind)]; }

MetricKind parse_metric_kind(std::string_view name) {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    if (kMetricNames[i] == name) return static_cast<MetricKind>(i);
  }
  fail(ErrorKind::configuration, "unknown metric '" + std::string(name) + "'");
}

bool is_kernel(MetricKind kind) {
  return kind == MetricKind::linear_kernel || kind == MetricKind::laplacian_kernel || kind == MetricKind::rbf_kernel;
}

bool uses_bandwidth(MetricKind kind) { return kind == MetricKind::laplacian_kernel || kind == MetricKind::rbf_kernel; }

void validate(const MetricSpec& spec) {
  if (uses_bandwidth(spec.kind) && !spec.bandwidth.median &&
      !(spec.bandwidth.gamma > 0.0 && std::isfinite(spec.bandwidth.gamma))) {
    fail(ErrorKind::configuration, "kernel bandwidth gamma must be a positive finite number");
  }
}

double scalar_f(std::span<const double> xi, std::span<const double> xj, MetricKind kind, double gamma) {
  if (xi.size() != xj.size()) fail(ErrorKind::validation, "scalar_f: vectors differ in length");
  if (xi.empty()) fail(ErrorKind::validation, "scalar_f: empty vectors");

  switch (kind) {
    case MetricKind::pearson_dist:
      return pearson_distance(xi, xj);
    case MetricKind::euclidean:
      return std::sqrt(std::max(0.0, dot(xi, xi) + dot(xj, xj) - 2.0 * dot(xi, xj)));
    case MetricKind::cosine_dist:
      return cosine_distance(xi, xj);
    case MetricKind::linear_kernel:
      return dot(xi, xj);
    case MetricKind::laplacian_kernel:
      return std::exp(-gamma * l1_distance(xi, xj));
    case MetricKind::rbf_kernel:
      return std::exp(-gamma * squared_distance(xi, xj));
  }
  fail(ErrorKind::configuration, "scalar_f: unknown metric");
}

double median_bandwidth(const FeatureMatrix& xhat, MetricKind kind) {
  if (!uses_bandwidth(kind)) fail(ErrorKind::configuration, "median_bandwidth: metric has no bandwidth");
  const Index n = xhat.rows();
  if (n < 2) fail(ErrorKind::validation, "median_bandwidth: need at least 2 images");

  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      distances.push_back(kind == MetricKind::laplacian_kernel ? l1_distance(xhat.row(i), xhat.row(j))
                                                               : squared_distance(xhat.row(i), xhat.row(j)));
    }
  }
  const double med = lower_median(std::move(distances));
  if (!(med > 0.0)) {
    fail(ErrorKind::numeric, "median_bandwidth: median pairwise distance is 0 (rows identical)" +
                                 (xhat.source.empty() ? std::string() : " in " + xhat.source));
  }
  return kind == MetricKind::laplacian_kernel ? 1.0 / med : 1.0 / (2.0 * med);
}

double resolve_bandwidth(const FeatureMatrix& xhat, const MetricSpec& spec) {
  if (!uses_bandwidth(spec.kind)) return 0.0;
  return spec.bandwidth.median ? median_bandwidth(xhat, spec.kind) : spec.bandwidth.gamma;
}

DissimilarityMatrix pairwise_matrix(const FeatureMatrix& xhat, const MetricSpec& spec) {
  validate(spec);
  validate(xhat);
  const Index n = xhat.rows();

  for (Index i = 0; i < n; ++i) {
    if (spec.kind == MetricKind::pearson_dist && row_variance_sum(xhat.row(i)) == 0.0) {
      fail(ErrorKind::numeric, "pearson_dist: features of image '" + xhat.image_ids[i] + "' have zero variance");
    }
    if (spec.kind == MetricKind::cosine_dist && dot(xhat.row(i), xhat.row(i)) == 0.0) {
      fail(ErrorKind::numeric, "cosine_dist: features of image '" + xhat.image_ids[i] + "' are all zero");
    }
  }

  DissimilarityMatrix out;
  out.kind = spec.kind;
  out.image_ids = xhat.image_ids;
  out.gamma = resolve_bandwidth(xhat, spec);
  out.data.resize(n, n);

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const auto i = static_cast<Index>(row);
    for (Index j = i; j < n; ++j) out.data(i, j) = scalar_f(xhat.row(i), xhat.row(j), spec.kind, out.gamma);
  });
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < i; ++j) out.data(i, j) = out.data(j, i);
  }
  return out;
}

}  // namespace dds
