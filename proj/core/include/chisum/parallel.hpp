#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace chisum {

/// Process-wide worker count. Initialised from CHISUM_THREADS (default 1).
unsigned thread_count();
void set_thread_count(unsigned n);

/// Runs body(i) for i in [0, n) on up to thread_count() workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Evaluates f on each block index and returns the results in block order, so any
/// left-to-right reduction over them is independent of the worker count.
template <class T, class F>
std::vector<T> map_blocks(std::size_t n_blocks, F&& f) {
    std::vector<T> out(n_blocks);
    parallel_for(n_blocks, [&](std::size_t i) { out[i] = f(i); });
    return out;
}

}  // namespace chisum
