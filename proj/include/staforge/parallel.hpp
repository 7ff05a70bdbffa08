#pragma once

#include <cstddef>
#include <functional>

namespace staforge {

/// Worker count: STA_FORGE_THREADS if set and positive, else hardware concurrency.
int default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = default).
/// The first exception thrown by any call is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace staforge
