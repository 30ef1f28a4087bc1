#pragma once

// Index-parallel loops over std::thread. Work is split into contiguous
// blocks and every index writes only its own slot, so results do not depend
// on the thread count.

#include <cstddef>
#include <functional>

namespace dyncap {

/// Worker cap: set_thread_count() if called with n > 0, else DYNCAP_THREADS,
/// else the hardware concurrency.
unsigned thread_count();
void set_thread_count(unsigned n);

/// Calls body(i) for i in [0, n). The first exception thrown by any worker is
/// rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace dyncap
