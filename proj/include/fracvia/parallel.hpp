#pragma once

#include <cstddef>
#include <functional>

namespace fracvia {

/// Worker count: FRACVIA_THREADS if set and positive, else hardware
/// concurrency (at least 1).
std::size_t thread_count();

/// Override for the current process; 0 restores the environment default.
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index
/// is processed exactly once; body must only write to index-owned storage.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fracvia
