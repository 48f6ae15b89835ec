#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library's numeric code paths.

#include <vector>

#include "dds/types.hpp"

namespace oracle {

using dds::Matrix;
using dds::RowMatrix;

/// (v[i] - mean) / population std, evaluated with plain scalar loops.
double zscore_value(const std::vector<double>& v, std::size_t i);

/// Pearson via the raw-moment formula (n*Sxy - Sx*Sy) / sqrt(...).
double pearson(const std::vector<double>& a, const std::vector<double>& b);

/// Ranks by counting: 1 + #{smaller} + 0.5 * #{equal, other}.
std::vector<double> counting_ranks(const std::vector<double>& v);

double spearman(const std::vector<double>& a, const std::vector<double>& b);

/// Literal Szekely-Rizzo U-centering with a_ii taken as 0; every sum is
/// recomputed inside the double loop.
Matrix u_center_literal(const Matrix& a);

/// H * M * H with an explicitly built H.
Matrix double_center_product(const Matrix& m);

/// Textbook RSA: column-center, 1 - Pearson RDMs, Spearman of upper triangles.
double rsa_textbook(const RowMatrix& x, const RowMatrix& y);

/// zscore -> cosine distance -> U-centering -> Pearson of off-diagonals,
/// written as one straight sequence of loops.
double dds_zscore_cosine_unbiased(const RowMatrix& x, const RowMatrix& y);

/// Brute-force |top-k(aff) ∩ top-5(gt)| using repeated max selection.
int topk_overlap(const std::vector<double>& aff, const std::vector<double>& gt, int k, int reference = 5);

}  // namespace oracle
