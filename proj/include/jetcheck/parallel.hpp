#pragma once

#include <cstddef>
#include <functional>

namespace jetcheck {

/// Worker count from JETCHECK_THREADS, else the hardware concurrency (>= 1).
int worker_threads();

/// Runs body(i) for i in [0, count). Each index is processed exactly once;
/// callers keep results deterministic by writing to slot i only.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace jetcheck
