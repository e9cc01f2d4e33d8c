#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace mafia {

/// Worker count: MAFIA_ODDS_THREADS if set to a positive integer, else the
/// hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("MAFIA_ODDS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into contiguous chunks and runs fn(chunk, begin, end) on
/// each. Results are written by chunk index, so merging is schedule
/// independent.
template <class Fn>
void parallel_chunks(std::int64_t count, unsigned chunks, Fn&& fn) {
  if (count <= 0) return;
  chunks = static_cast<unsigned>(std::clamp<std::int64_t>(chunks, 1, count));
  if (chunks == 1) {
    fn(0u, std::int64_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(chunks);
  for (unsigned c = 0; c < chunks; ++c) {
    const std::int64_t begin = count * c / chunks;
    const std::int64_t end = count * (c + 1) / chunks;
    pool.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
  }
}

}  // namespace mafia
