#pragma once

#include <cstddef>
#include <functional>

namespace rkm {

/// Worker-thread count: `requested` if positive, else the RKM_THREADS
/// environment variable, else std::thread::hardware_concurrency().
int resolve_threads(int requested);

/// Runs fn(0..n-1) on up to `threads` workers. Results must be written to
/// per-index slots; scheduling order is unspecified and must not matter.
/// The first exception thrown by any worker is rethrown after completion.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace rkm
