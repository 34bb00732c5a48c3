#pragma once

#include <cstddef>
#include <functional>

namespace heisenfft {

/// Runs fn(begin, end) over a static partition of [0, count) on worker
/// threads.  Partitioning is by index only, so per-index work (and any
/// summation inside one index) keeps a fixed order regardless of the thread
/// count; results are bitwise independent of parallelism degree.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& fn);

/// Overrides the worker count (0 = hardware concurrency).  Test hook.
void set_thread_count(unsigned n);
unsigned thread_count();

} // namespace heisenfft
