#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace nkspin {

/// Worker count: NKSPIN_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
std::size_t thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() threads. Each index
/// is visited exactly once; the exception thrown at the lowest index (if any)
/// is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Index-addressed parallel map; the result is independent of the thread count.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& f) {
    std::vector<R> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
    return out;
}

}  // namespace nkspin
