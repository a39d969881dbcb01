#pragma once

#include <cstddef>
#include <functional>

namespace qtime {

/// Number of worker threads to use; honors the QTIME_THREADS environment
/// variable, defaulting to std::thread::hardware_concurrency().
size_t worker_count();

/// Runs fn(i) for i in [0, n) across worker threads with a static block
/// partition. Results must be written to disjoint per-index slots so the
/// outcome is independent of the thread schedule; callers that reduce do so
/// sequentially afterwards, in index order.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace qtime
