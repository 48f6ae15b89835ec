#pragma once

#include <cstddef>
#include <functional>

namespace dds {

/// Worker cap: DDS_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each
/// index runs exactly once; callers write results into per-index slots so the
/// outcome does not depend on the schedule. If any body throws, the exception
/// from the lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace dds
