#ifndef BFREE_PARALLEL_HPP
#define BFREE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace bfree {

/// Degree of parallelism handed down from the caller. Library code never
/// spawns more workers than this.
struct Parallelism {
  unsigned threads = 1;

  static Parallelism from_env(unsigned fallback) {
    if (const char* v = std::getenv("BFREE_THREADS")) {
      try {
        int t = std::stoi(v);
        if (t > 0) return {static_cast<unsigned>(t)};
      } catch (...) {
      }
    }
    return {std::max(1u, fallback)};
  }
};

/// Runs fn(i) for i in [0, n). Tasks are claimed dynamically; results must be
/// written to disjoint slots so the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Parallelism par, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(par.threads, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace bfree

#endif  // BFREE_PARALLEL_HPP
