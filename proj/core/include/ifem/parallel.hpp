#pragma once

#include <cstddef>
#include <functional>

namespace ifem {

/// Worker count: hardware concurrency, capped by the IFEM_THREADS variable.
unsigned worker_count();

/// Run body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
/// depend only on n and the worker count, and each index is visited once.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Sum of term(i) over [0, n) with a fixed reduction order: per-block
/// partial sums over fixed-size blocks, then added in block order. The
/// result does not depend on the worker count.
double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& term);

}  // namespace ifem
