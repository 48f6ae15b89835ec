#pragma once

#include <span>
#include <vector>

namespace dds::stats {

double mean(std::span<const double> v);

/// Population standard deviation (divides by n).
double population_std(std::span<const double> v);

/// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> v);

/// Pearson correlation. Throws a numeric Error if either side has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace dds::stats
