#include "stripdirac/common.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace sd {

int worker_count() {
  const char* env = std::getenv("STRIPDIRAC_WORKERS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  long n = std::strtol(env, &end, 10);
  if (end == env || n < 1) return 1;
  long hw = static_cast<long>(std::thread::hardware_concurrency());
  if (hw > 0 && n > hw) n = hw;
  return static_cast<int>(n);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  int nw = std::min(worker_count(), n);
  if (nw <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (int t = 0; t < nw; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sd
