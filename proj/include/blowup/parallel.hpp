#pragma once

#include <cstddef>
#include <functional>

namespace blowup {

/// Runs fn(0..count-1) on up to `jobs` threads (0 means hardware concurrency).
/// Indices are claimed in order; the first exception thrown by any job is
/// rethrown after all threads have joined.
void run_jobs(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace blowup
