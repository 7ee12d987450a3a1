// parallel.hpp — bounded data-parallel map over an index range.
#pragma once

#include <cstddef>
#include <functional>

namespace tmres::detail {

/// Worker count from TMRES_THREADS, defaulting to the available cores.
std::size_t worker_count();

/// Runs fn(0..count-1) across worker_count() threads. fn must be safe to
/// call concurrently for distinct indices; the first exception thrown is
/// rethrown on the calling thread after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace tmres::detail
