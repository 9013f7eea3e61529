#include "ifem/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace ifem {

unsigned worker_count() {
  static const unsigned count = [] {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("IFEM_THREADS")) {
      try {
        const long cap = std::stol(env);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
      } catch (const std::exception&) {
        // ignore malformed values
      }
    }
    return n;
  }();
  return count;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), (n + 1023) / 1024);
  if (workers <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
      const std::size_t b = w * chunk, e = std::min(n, b + chunk);
      if (b >= e) continue;
      pool.emplace_back([&body, &errors, w, b, e] {
        try {
          body(b, e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    try {
      body(0, std::min(n, chunk));
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  // Rethrow the error of the lowest chunk so failures are reproducible.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      double s = 0.0;
      for (std::size_t i = b * kBlock, e = std::min(n, i + kBlock); i < e; ++i) s += term(i);
      partial[b] = s;
    }
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace ifem
