#pragma once

// Deterministic work partition. A range is cut into a fixed number of chunks
// that does not depend on the worker count; each chunk's result lands in its
// own slot and the caller reduces the slots in order.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace normality {

inline unsigned default_thread_count() {
  if (const char* env = std::getenv("NORMALITY_LAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct ChunkRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  std::size_t index = 0;
};

// Splits [0, total) into `chunks` contiguous pieces (the last ones may be
// empty when total < chunks).
inline std::vector<ChunkRange> partition(std::uint64_t total, std::size_t chunks) {
  chunks = std::max<std::size_t>(chunks, 1);
  std::vector<ChunkRange> out(chunks);
  const std::uint64_t base = total / chunks;
  const std::uint64_t extra = total % chunks;
  std::uint64_t at = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::uint64_t len = base + (c < extra ? 1 : 0);
    out[c] = {at, at + len, c};
    at += len;
  }
  return out;
}

// Runs fn(chunk) for every chunk on up to `threads` workers. Exceptions are
// rethrown on the calling thread (the one from the lowest chunk index wins).
template <typename Fn>
void run_chunks(const std::vector<ChunkRange>& chunks, unsigned threads, Fn&& fn) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(chunks.size())));
  std::vector<std::exception_ptr> errors(chunks.size());
  if (threads == 1) {
    for (const auto& c : chunks) {
      try {
        fn(c);
      } catch (...) {
        errors[c.index] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= chunks.size()) return;
          try {
            fn(chunks[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace normality
