#pragma once

#include <cstddef>
#include <functional>

// Pointwise kernels may run across worker threads; EPADM_THREADS caps the
// worker count (default 1). Work is split into contiguous node ranges with
// disjoint writes, so results are identical for any thread count.

namespace epadm {

std::size_t worker_count();

// Calls fn(begin, end) over a static partition of [0, n). Exceptions from
// workers are rethrown on the calling thread.
void parallel_for_ranges(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace epadm
