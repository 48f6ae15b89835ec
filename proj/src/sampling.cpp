#include "dds/sampling.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "dds/error.hpp"

namespace dds {

std::uint64_t Sampler::uniform_index(std::uint64_t bound) {
  if (bound == 0) fail(ErrorKind::validation, "uniform_index: empty range");
  // Largest multiple of bound that fits; draws above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % bound;
}

std::vector<Index> Sampler::with_replacement(Index n, Index count) {
  if (n < 1 || count < 0) fail(ErrorKind::validation, "with_replacement: invalid sizes");
  std::vector<Index> out(static_cast<std::size_t>(count));
  for (auto& v : out) v = static_cast<Index>(uniform_index(static_cast<std::uint64_t>(n)));
  return out;
}

std::vector<Index> Sampler::without_replacement(Index n, Index count) {
  if (count < 0 || count > n) fail(ErrorKind::validation, "without_replacement: count exceeds population");
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < count; ++i) {
    const auto j = i + static_cast<Index>(uniform_index(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace dds
