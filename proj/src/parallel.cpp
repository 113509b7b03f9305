#include "morrey/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace morrey {

int resolve_threads(int requested) {
  if (const char* env = std::getenv("MORREY_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
      // fall through to other sources
    }
  }
  if (requested >= 1) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& body,
                  int threads) {
  if (n <= 0) return;
  int t = resolve_threads(threads);
  t = static_cast<int>(std::min<std::int64_t>(t, n));
  if (t <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t - 1);
  std::int64_t chunk = (n + t - 1) / t;
  for (int i = 1; i < t; ++i) {
    std::int64_t b = i * chunk;
    std::int64_t e = std::min<std::int64_t>(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  body(0, std::min<std::int64_t>(chunk, n));
  for (auto& th : pool) th.join();
}

}  // namespace morrey
