/*
   Copyright 2026 The lxray Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace lxray::detail {

/// Worker count: hardware concurrency, capped by LXRAY_THREADS when set.
inline std::size_t thread_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LXRAY_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    } catch (const std::exception&) {
      // unparsable value: ignore the cap
    }
  }
  return n;
}

/// Calls body(worker, begin, end) on contiguous chunks of [0, n). Results
/// must be written to per-worker or per-index storage; the first exception
/// thrown by any worker is rethrown.
template <typename Body>
void parallel_chunks(std::size_t n, Body&& body, std::size_t min_chunk = 64) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min(thread_count(), (n + min_chunk - 1) / min_chunk));
  if (workers <= 1) {
    body(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = std::min(n, w * step), e = std::min(n, b + step);
    pool.emplace_back([&, w, b, e] {
      try {
        body(w, b, e);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::size_t chunk_workers(std::size_t n, std::size_t min_chunk = 64) {
  return std::max<std::size_t>(1, std::min(thread_count(), (n + min_chunk - 1) / min_chunk));
}

}  // namespace lxray::detail
