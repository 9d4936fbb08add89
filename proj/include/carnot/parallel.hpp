#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace carnot {

/// Worker count: CARNOT_KIT_THREADS if set and positive, else hardware threads.
int thread_count();

/// Runs fn(chunk_index, begin, end) over fixed-size chunks of [0, n). Chunk
/// boundaries depend only on n and chunk, never on the thread count, so
/// per-chunk results (and per-chunk RNG streams) are reproducible.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t chunk, Fn&& fn) {
  if (n == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        fn(c, c * chunk, std::min(n, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = chunks;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

/// Per-chunk partial results folded left to right in chunk order.
template <class R, class Fn, class Combine>
R parallel_reduce(std::size_t n, std::size_t chunk, R init, Fn&& fn, Combine&& combine) {
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<R> partial(chunks, init);
  parallel_chunks(n, chunk, [&](std::size_t c, std::size_t b, std::size_t e) { partial[c] = fn(c, b, e); });
  R acc = init;
  for (auto& p : partial) acc = combine(std::move(acc), std::move(p));
  return acc;
}

}  // namespace carnot
