#pragma once

#include <cstddef>
#include <functional>

namespace gupdirac {

/// Worker count: GUPDIRAC_THREADS if set to a positive integer, else hardware concurrency.
[[nodiscard]] unsigned thread_count();

/// Runs job(i) for i in [0, count) on up to `threads` workers (0 = thread_count()).
/// Jobs must be independent; the first exception thrown is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job, unsigned threads = 0);

} // namespace gupdirac
