#include "isoform/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace isoform {

namespace {

std::atomic<int> g_cap{0};  // 0 = uninitialized

int env_cap() {
  const char* v = std::getenv("SEMIGROUP_ISOFORM_THREADS");
  if (v == nullptr) return 0;
  const int parsed = std::atoi(v);
  return parsed > 0 ? parsed : 1;
}

}  // namespace

int thread_cap() {
  int cap = g_cap.load(std::memory_order_relaxed);
  if (cap == 0) {
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    cap = hw > 0 ? hw : 1;
    const int env = env_cap();
    if (env > 0 && env < cap) cap = env;
    g_cap.store(cap, std::memory_order_relaxed);
  }
  return cap;
}

void set_thread_cap(int cap) {
  g_cap.store(cap > 0 ? cap : 1, std::memory_order_relaxed);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int workers = thread_cap();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int count = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers), n));
  pool.reserve(count);
  for (int t = 0; t < count - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace isoform
