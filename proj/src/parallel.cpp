#include "dsnls/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ds {

namespace {
std::atomic<unsigned> g_override{0};

unsigned from_env() {
  if (const char* s = std::getenv("DS_THREADS")) {
    try {
      const long v = std::stol(s);
      if (v >= 1) return unsigned(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}
}  // namespace

unsigned thread_count() {
  const unsigned o = g_override.load();
  return o ? o : from_env();
}

void set_thread_count(unsigned n) { g_override.store(n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = unsigned(std::min<std::size_t>(thread_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace ds
