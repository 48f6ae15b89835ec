#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dds/types.hpp"

namespace dds {

/// Seeded index sampler on top of std::mt19937_64, whose output sequence is
/// fixed by the standard. Index draws use rejection sampling instead of
/// std::uniform_int_distribution (implementation-defined), so a seed gives the
/// same draws with every standard library.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// `count` draws from [0, n) with replacement, in draw order.
  std::vector<Index> with_replacement(Index n, Index count);

  /// `count` distinct indices from [0, n) (partial Fisher-Yates), sorted ascending.
  std::vector<Index> without_replacement(Index n, Index count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace dds
