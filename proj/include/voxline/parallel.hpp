// Copyright 2026 The Voxline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace voxline {

// Worker count used when a caller passes 0.
inline unsigned default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

// Runs body(begin, end) over [0, n) in chunks claimed dynamically by
// `workers` threads. Callers must not depend on which worker runs a chunk.
template <typename Body>
void parallel_for_chunks(size_t n, unsigned workers, size_t chunk, Body&& body) {
  if (n == 0) return;
  if (workers == 0) workers = default_workers();
  chunk = std::max<size_t>(chunk, 1);
  const size_t chunks = (n + chunk - 1) / chunk;
  workers = static_cast<unsigned>(std::min<size_t>(workers, chunks));
  if (workers <= 1) {
    body(size_t{0}, n);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    try {
      for (;;) {
        const size_t c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= chunks) break;
        const size_t begin = c * chunk;
        body(begin, std::min(n, begin + chunk));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(chunks);
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

template <typename Body>
void parallel_for(size_t n, unsigned workers, Body&& body) {
  const unsigned w = workers == 0 ? default_workers() : workers;
  const size_t chunk = std::max<size_t>(1, n / (static_cast<size_t>(w) * 8));
  parallel_for_chunks(n, w, chunk, [&](size_t b, size_t e) {
    for (size_t i = b; i < e; ++i) body(i);
  });
}

}  // namespace voxline
