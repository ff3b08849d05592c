#pragma once

#include <cstddef>
#include <functional>

namespace qfric {

// Worker count from QFRIC_WORKERS when set to a positive integer, otherwise
// the hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
// processed exactly once, so results written by index do not depend on the
// thread count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}
