#pragma once

#include <cstddef>
#include <functional>

namespace dpnqcrb {

/// Worker count from the DPNQCRB_THREADS environment variable, falling back
/// to the hardware concurrency (at least 1).
int default_thread_count();

/// Runs task(i) for i in [0, count) on up to `threads` workers. Tasks must
/// write only to their own output slot. The first exception thrown by any
/// task is rethrown after all workers join. threads <= 0 means
/// default_thread_count().
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

}  // namespace dpnqcrb
