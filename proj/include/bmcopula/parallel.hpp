#pragma once

#include <cstddef>
#include <functional>

namespace bmcopula {

/// Hardware concurrency, capped by the BMCOPULA_THREADS environment variable.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads.  The first
/// exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bmcopula
