#pragma once

#include <cstddef>
#include <functional>

namespace gevlab {

/// Name of the environment variable holding the worker count.
inline constexpr const char* kWorkersEnv = "GEVLAB_WORKERS";

/// Worker count from GEVLAB_WORKERS, else the hardware concurrency (>= 1).
/// Throws ValidationError on a malformed value.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on at most `workers` threads (0 = worker_count()).
/// Indices are handed out in contiguous blocks; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers = 0);

}  // namespace gevlab
