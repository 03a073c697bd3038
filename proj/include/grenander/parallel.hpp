#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace grenander {

//! Thread count from GRENANDER_THREADS, else the hardware concurrency.
inline unsigned default_thread_count()
{
  if (const char* env = std::getenv("GRENANDER_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

//! Runs body(i) for i in [0, count) over `threads` workers. Work is split into
//! contiguous blocks; callers write results by index, so output does not
//! depend on scheduling. If bodies throw, one of the exceptions is rethrown
//! after every worker has finished.
template<class Body>
void parallel_for(std::size_t count, unsigned threads, const Body& body)
{
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i)
          body(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure)
          failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace grenander
