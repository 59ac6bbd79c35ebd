#pragma once

#include <cstddef>
#include <functional>

namespace dmcd {

/// Worker count: DMCD_THREADS if set and positive, else hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Runs fn(i) for i in [0, n). Each index is written by exactly one task, so
/// results never depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace dmcd
