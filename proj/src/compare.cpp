#include "dds/compare.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dds/error.hpp"
#include "dds/stats.hpp"

namespace dds {
namespace {

constexpr std::array<std::string_view, 3> kCenteringNames = {"none", "unbiased", "double"};
constexpr std::array<std::string_view, 3> kScoreNames = {"pearson_full", "spearman_upper", "cosine_full"};

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) fail(ErrorKind::validation, std::string(what) + ": matrix is not square");
}

DissimilarityMatrix with_data(const DissimilarityMatrix& like, Matrix data) {
  DissimilarityMatrix out;
  out.data = std::move(data);
  out.kind = like.kind;
  out.image_ids = like.image_ids;
  out.gamma = like.gamma;
  return out;
}

std::vector<double> off_diagonal(const Matrix& m) {
  const Index n = m.rows();
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n * (n - 1)));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j) v.push_back(m(i, j));
    }
  }
  return v;
}

std::vector<double> strict_upper(const Matrix& m) {
  const Index n = m.rows();
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) v.push_back(m(i, j));
  }
  return v;
}

}  // namespace

std::string_view to_string(Centering c) { return kCenteringNames[static_cast<std::size_t>(c)]; }
std::string_view to_string(ScoreKind s) { return kScoreNames[static_cast<std::size_t>(s)]; }

Centering parse_centering(std::string_view name) {
  for (std::size_t i = 0; i < kCenteringNames.size(); ++i) {
    if (kCenteringNames[i] == name) return static_cast<Centering>(i);
  }
  fail(ErrorKind::configuration, "unknown centering '" + std::string(name) + "'");
}

ScoreKind parse_score_kind(std::string_view name) {
  for (std::size_t i = 0; i < kScoreNames.size(); ++i) {
    if (kScoreNames[i] == name) return static_cast<ScoreKind>(i);
  }
  fail(ErrorKind::configuration, "unknown score '" + std::string(name) + "'");
}

// The diagonal is treated as zero, as for a distance matrix; this keeps row
// sums of the result at zero and the operation idempotent for kernel inputs.
Matrix u_center(const Matrix& m) {
  require_square(m, "u_center");
  const Index n = m.rows();
  if (n < 4) fail(ErrorKind::validation, "u_center: need n >= 4, got " + std::to_string(n));

  Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd col_sum = Eigen::VectorXd::Zero(n);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      row_sum(i) += m(i, j);
      col_sum(j) += m(i, j);
      total += m(i, j);
    }
  }

  const double nm2 = static_cast<double>(n - 2);
  const double grand = total / (static_cast<double>(n - 1) * nm2);
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      out(i, j) = i == j ? 0.0 : m(i, j) - row_sum(i) / nm2 - col_sum(j) / nm2 + grand;
    }
  }
  return out;
}

DissimilarityMatrix u_center(const DissimilarityMatrix& m) { return with_data(m, u_center(m.data)); }

Matrix double_center(const Matrix& m) {
  require_square(m, "double_center");
  const Index n = m.rows();
  if (n < 2) fail(ErrorKind::validation, "double_center: need n >= 2");
  const Eigen::VectorXd row_mean = m.rowwise().mean();
  const Eigen::RowVectorXd col_mean = m.colwise().mean();
  const double grand = m.mean();
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out(i, j) = m(i, j) - row_mean(i) - col_mean(j) + grand;
  }
  return out;
}

DissimilarityMatrix double_center(const DissimilarityMatrix& m) { return with_data(m, double_center(m.data)); }

DissimilarityMatrix apply_centering(const DissimilarityMatrix& m, Centering c) {
  switch (c) {
    case Centering::unbiased:
      return u_center(m);
    case Centering::double_centered:
      return double_center(m);
    case Centering::none:
      break;
  }
  return m;
}

double score(const Matrix& mx, const Matrix& my, ScoreKind kind) {
  require_square(mx, "score");
  require_square(my, "score");
  if (mx.rows() != my.rows()) {
    fail(ErrorKind::alignment, "score: matrices have different sizes (" + std::to_string(mx.rows()) + " vs " +
                                   std::to_string(my.rows()) + ")");
  }
  if (mx.rows() < 2) fail(ErrorKind::validation, "score: need n >= 2");

  switch (kind) {
    case ScoreKind::pearson_full:
      return stats::pearson(off_diagonal(mx), off_diagonal(my));
    case ScoreKind::spearman_upper:
      return stats::spearman(strict_upper(mx), strict_upper(my));
    case ScoreKind::cosine_full: {
      double xy = 0.0, xx = 0.0, yy = 0.0;
      for (Index j = 0; j < mx.cols(); ++j) {
        for (Index i = 0; i < mx.rows(); ++i) {
          xy += mx(i, j) * my(i, j);
          xx += mx(i, j) * mx(i, j);
          yy += my(i, j) * my(i, j);
        }
      }
      if (xx == 0.0 || yy == 0.0) fail(ErrorKind::numeric, "cosine_full: a (centered) matrix is all zero");
      return std::clamp(xy / std::sqrt(xx * yy), -1.0, 1.0);
    }
  }
  fail(ErrorKind::configuration, "score: unknown kind");
}

double score(const DissimilarityMatrix& mx, const DissimilarityMatrix& my, ScoreKind kind) {
  if (mx.image_ids != my.image_ids) fail(ErrorKind::alignment, "score: matrices are over different image orders");
  return score(mx.data, my.data, kind);
}

}  // namespace dds
