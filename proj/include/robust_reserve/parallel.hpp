#pragma once

#include <cstddef>
#include <functional>

namespace robust_reserve {

/// Worker count: ROBUST_RESERVE_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(i) for every i in [0, count), spread over worker_count()
/// threads. Each index is visited exactly once; callers write results by
/// index so output never depends on scheduling. The first exception thrown
/// by any body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace robust_reserve
