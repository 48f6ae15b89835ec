#pragma once

#include <string>
#include <string_view>

#include "dds/metrics.hpp"

namespace dds {

enum class Centering { none, unbiased, double_centered };
enum class ScoreKind { pearson_full, spearman_upper, cosine_full };

std::string_view to_string(Centering c);
std::string_view to_string(ScoreKind s);
Centering parse_centering(std::string_view name);
ScoreKind parse_score_kind(std::string_view name);

/// The comparison function g: optional centering of both matrices, then a
/// correlation or cosine between them.
struct ComparisonSpec {
  Centering centering = Centering::unbiased;
  ScoreKind score = ScoreKind::pearson_full;
};

struct SimilarityScore {
  double value = 0.0;
  std::string config_digest;
};

/// U-centering (Szekely & Rizzo). Requires n >= 4; the diagonal of the result
/// is zero.
DissimilarityMatrix u_center(const DissimilarityMatrix& m);
Matrix u_center(const Matrix& m);

/// H M H with H = I - 11'/n.
DissimilarityMatrix double_center(const DissimilarityMatrix& m);
Matrix double_center(const Matrix& m);

DissimilarityMatrix apply_centering(const DissimilarityMatrix& m, Centering c);

/// Final comparison of two already-centered matrices.
///   pearson_full    Pearson over all off-diagonal entries
///   spearman_upper  Spearman (average-rank ties) over the strict upper triangle
///   cosine_full     sum(mx .* my) / sqrt(sum(mx^2) sum(my^2)) over all entries
/// Result is clamped to [-1, 1].
double score(const DissimilarityMatrix& mx, const DissimilarityMatrix& my, ScoreKind kind);
double score(const Matrix& mx, const Matrix& my, ScoreKind kind);

}  // namespace dds
