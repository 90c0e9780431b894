#include "tiqs/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tiqs {

int thread_count() {
  if (const char* env = std::getenv("TIQS_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace tiqs
