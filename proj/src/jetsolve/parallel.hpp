#pragma once

#include <cstddef>
#include <functional>

namespace jetsolve {

// Worker count used by node-parallel loops. 0 selects hardware concurrency.
void set_thread_count(int threads);
int thread_count();

// Calls body(i) for i in [0, count). Each index is visited exactly once; the
// split into contiguous chunks does not depend on timing, so results written
// per index are deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace jetsolve
