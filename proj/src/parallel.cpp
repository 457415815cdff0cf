#include "cubexp/parallel.hpp"

#include <algorithm>
#include <atomic>

namespace cubexp {

namespace {
std::atomic<int> g_thread_limit{0};  // 0 = hardware concurrency
}

int thread_limit() {
  const int n = g_thread_limit.load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void set_thread_limit(int n) { g_thread_limit.store(std::max(n, 0)); }

}  // namespace cubexp
