#pragma once

#include <cstddef>
#include <functional>

namespace growthlab {

/// Worker cap: GROWTHLAB_THREADS when set (>= 1), else hardware concurrency.
unsigned max_threads();

/// Runs fn(i) for i in [0, n) across up to max_threads() workers. Each index
/// is executed exactly once; callers make runs deterministic by indexing
/// results, so scheduling order cannot matter. Exceptions from workers are
/// rethrown on the calling thread.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace growthlab
