#pragma once

#include <cstddef>
#include <functional>

namespace ds {

/// Worker count: DS_THREADS if set (>= 1), else the hardware concurrency.
unsigned thread_count();
/// Overrides the environment for this process (0 restores the default).
void set_thread_count(unsigned n);

/// Runs body(i) for i in [0, n). Iterations must be independent; results are
/// deterministic because each index writes only its own output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ds
