// Copyright 2026 The biosim Authors. All Rights Reserved.
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
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace biosim::detail {

/// Contiguous [begin, end) ranges, one per worker, as used by a static schedule.
inline std::vector<std::pair<std::size_t, std::size_t>> static_chunks(std::size_t n, int threads) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::vector<std::pair<std::size_t, std::size_t>> chunks(workers);
  const std::size_t base = n / workers;
  const std::size_t extra = n % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    chunks[w] = {begin, begin + len};
    begin += len;
  }
  return chunks;
}

/// Runs body(worker, i) for i in [0, n) with one contiguous chunk per worker.
/// The exception raised at the lowest index is rethrown after the loop.
template <class Body>
void parallel_chunks(std::size_t n, int threads, Body&& body) {
  const auto chunks = static_chunks(n, threads);
  std::exception_ptr first_error;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  std::mutex error_mutex;
  auto run_chunk = [&](std::size_t w) {
    for (std::size_t i = chunks[w].first; i < chunks[w].second; ++i) {
      try {
        body(w, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
        return;
      }
    }
  };
  const long workers = static_cast<long>(chunks.size());
#ifdef _OPENMP
  if (workers > 1) {
#pragma omp parallel for num_threads(static_cast<int>(workers)) schedule(static, 1)
    for (long w = 0; w < workers; ++w) run_chunk(static_cast<std::size_t>(w));
  } else {
    run_chunk(0);
  }
#else
  for (long w = 0; w < workers; ++w) run_chunk(static_cast<std::size_t>(w));
#endif
  if (first_error) std::rethrow_exception(first_error);
}

template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  parallel_chunks(n, threads, [&](std::size_t, std::size_t i) { body(i); });
}

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_num_procs();
#else
  return 1;
#endif
}

}  // namespace biosim::detail
