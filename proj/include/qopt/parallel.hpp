// Copyright 2026 The qopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QOPT_PARALLEL_HPP_INCLUDED
#define QOPT_PARALLEL_HPP_INCLUDED

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace qopt {

// Worker count: QOPT_THREADS if set and positive, else hardware concurrency.
inline std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("QOPT_THREADS")) {
    try {
      long v = std::stol(env);
      if (v > 0)
        return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
    } catch (...) {
    }
  }
  return hw;
}

// Splits [0, total) into `chunks` contiguous ranges and calls
// fn(chunk_index, begin, end) for each, spread over at most worker_count()
// threads. Chunk boundaries depend only on `chunks`, so callers that reduce
// per-chunk results in chunk order get the same answer on any machine.
template <typename Fn>
void parallel_chunks(std::uint64_t total, std::size_t chunks, Fn &&fn) {
  chunks = static_cast<std::size_t>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(chunks, std::max<std::uint64_t>(total, 1))));
  auto bound = [&](std::size_t c) { return total * c / chunks; };
  const auto threads = std::min(chunks, worker_count());
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c)
      fn(c, bound(c), bound(c + 1));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t c; (c = next.fetch_add(1)) < chunks;) {
        try {
          fn(c, bound(c), bound(c + 1));
        } catch (...) {
          errors[c] = std::current_exception();
        }
      }
    });
  for (auto &t : pool)
    t.join();
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

// Fixed chunk count for order-sensitive floating-point walks.
inline constexpr std::size_t kWalkChunks = 64;

} // namespace qopt

#endif // QOPT_PARALLEL_HPP_INCLUDED
