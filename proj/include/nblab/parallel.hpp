#pragma once

#include <atomic>
#include <cstddef>
#include <functional>

namespace nblab {

// Global worker count used by all parallel loops. 0 = hardware concurrency.
// Results never depend on this value: every parallel loop writes into
// position-addressed slots and reductions run in a fixed index order.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n). fn must only touch state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace nblab
