#pragma once

#include <cstddef>
#include <functional>

namespace esgmv {

/// Worker count: ESG_REGMV_THREADS when set to a positive integer, else the
/// hardware concurrency (at least 1).
unsigned default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index runs
/// exactly once; callers write results by index so output order never
/// depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace esgmv
