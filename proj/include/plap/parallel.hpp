#pragma once

#include <cstddef>
#include <functional>

namespace plap {

/// Worker count from PLAP_WORKERS, else the hardware concurrency (at least 1).
int default_worker_count();

/// Calls body(i) for i in [0, n) on up to `workers` threads (0 = default).
/// Every index runs even if some fail; afterwards the exception of the
/// lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int workers = 0);

}  // namespace plap
