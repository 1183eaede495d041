#pragma once

#include <cstddef>
#include <functional>

namespace fracplate {

/// Worker count: FRACPLATE_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Calls body(i) for every i in [0, n), split into contiguous blocks over
/// thread_count() threads. Results must go to per-index slots so the outcome
/// does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fracplate
