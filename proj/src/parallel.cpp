#include "driftbridge/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace driftbridge {

std::size_t thread_budget() {
  std::size_t budget = 0;
  if (const char* env = std::getenv("DRIFTBRIDGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 0) budget = static_cast<std::size_t>(v);
  }
  if (budget == 0) budget = std::thread::hardware_concurrency();
  return budget ? budget : 1;
}

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body) {
  if (end <= begin) return;
  const std::size_t count = end - begin;
  const std::size_t workers = std::min(thread_budget(), count);
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{begin};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= end) break;
        body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace driftbridge
