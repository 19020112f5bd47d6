#pragma once

#include <functional>

namespace dyadic {

/// Worker count: DYADIC_THREADS if set to a positive integer, else hardware concurrency.
int thread_count();

/// Runs fn(0..n-1) on up to thread_count() threads. Results must be written per index so the
/// outcome never depends on scheduling. The first exception thrown is rethrown.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace dyadic
