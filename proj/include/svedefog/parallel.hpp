// parallel.hpp - row-sliced parallelism helper.
//
// Work is split into contiguous row ranges with disjoint outputs, so the
// result never depends on the thread count. SVE_DEFOG_THREADS caps the pool
// (0 or unset = hardware concurrency).

#pragma once

#include <functional>

namespace svedefog {

int thread_count();

// Calls fn(row_begin, row_end) over a partition of [0, rows).
void parallel_rows(int rows, const std::function<void(int, int)>& fn);

}  // namespace svedefog
