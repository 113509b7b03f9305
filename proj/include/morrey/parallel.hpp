#pragma once

#include <cstdint>
#include <functional>

namespace morrey {

// Worker count resolution: MORREY_THREADS environment variable wins,
// then the requested count, then hardware concurrency.
int resolve_threads(int requested = 0);

// Splits [0, n) into at most `threads` contiguous chunks and runs
// body(begin, end) on each. Chunks never overlap, so any computation
// that writes only to its own index range is bitwise independent of
// the worker count. Reductions across chunks are the caller's problem
// and must be order-independent (max) or done serially.
void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& body,
                  int threads = 0);

}  // namespace morrey
