#pragma once

#include <cstddef>
#include <functional>

namespace cohercause {

/// Worker count: COHERCAUSE_JOBS if set and positive, else hardware concurrency.
std::size_t default_jobs();

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Indices are handed
/// out in contiguous chunks; body must only write to per-index state.
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& body);

}  // namespace cohercause
