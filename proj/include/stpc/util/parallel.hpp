#pragma once

#include <cstddef>
#include <functional>

namespace stpc {

// Worker count: hardware concurrency, capped by STPC_THREADS when set.
std::size_t worker_count();

// Calls body(i) for i in [0, count). Each index runs exactly once; the first
// exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body);

}  // namespace stpc
