// Deterministic parallel helpers. Work items are independent and write
// only their own output slot, so results are identical for any thread
// count; reductions elsewhere combine partials in fixed index order.
#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace cubexp {

int thread_limit();
void set_thread_limit(int n);

template <class F>
void parallel_for_index(std::size_t n, F&& f, int threads = 0) {
  if (threads <= 0) threads = thread_limit();
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        f(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace cubexp
