#pragma once

#include <cstddef>
#include <functional>

namespace potlab {

/// Worker count: POTLAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index
/// runs exactly once; results must be written to per-index slots so output
/// does not depend on scheduling. The exception thrown by the lowest failing
/// index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace potlab
