#pragma once

#include <cstddef>
#include <functional>

namespace cirfilter {

/// Effective worker count: hardware concurrency, capped by the
/// CIRFILTER_THREADS environment variable and by `requested` when nonzero.
/// Never less than 1.
unsigned thread_cap(unsigned requested = 0);

/// Runs fn(0..n-1) on up to thread_cap(threads) workers. Work items must be
/// independent; callers keep determinism by writing item i into slot i.
/// The first exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

}  // namespace cirfilter
