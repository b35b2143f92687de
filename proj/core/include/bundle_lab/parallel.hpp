#pragma once

#include <cstddef>
#include <functional>

namespace bundle_lab {

/// Worker count: BUNDLE_LAB_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
std::size_t thread_count();

/// Runs fn(i) for i in [0, n). Indices are split into contiguous chunks, one
/// per worker, so any per-index result written to slot i is independent of
/// the schedule. The first exception thrown by a worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace bundle_lab
