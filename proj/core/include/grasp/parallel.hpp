#pragma once

#include <cstddef>
#include <functional>

namespace grasp {

// Runs fn(0..n-1) across a persistent worker pool (caller participates).
// Every index writes only its own outputs, so results are independent of
// scheduling and of the worker count. Nested calls degrade to serial.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Worker count including the calling thread. Defaults to the hardware
// concurrency, clamped to [1, 16].
void set_thread_count(int n);
int thread_count();

} // namespace grasp
