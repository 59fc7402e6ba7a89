#pragma once

#include <cstddef>
#include <functional>

namespace gsk {

// Worker count: GSK_THREADS when set to a positive integer, else the
// hardware concurrency (at least 1).
std::size_t thread_budget();

// Runs body(i) for i in [0, count) on up to thread_budget() threads. Bodies
// must write only to their own slot; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace gsk
