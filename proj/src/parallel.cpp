#include "morse_concordance/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace morse_concordance {

unsigned thread_count() {
  const unsigned hardware = std::max(1U, std::thread::hardware_concurrency());
  const char* env = std::getenv("MORSE_CONCORDANCE_THREADS");
  if (env == nullptr || *env == '\0') return hardware;
  try {
    const long value = std::stol(env);
    if (value < 0) return hardware;
    return static_cast<unsigned>(value);
  } catch (...) {
    return hardware;
  }
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(thread_count(), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace morse_concordance
