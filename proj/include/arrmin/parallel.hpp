// Copyright 2026 The Authors.
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

#ifndef ARRMIN_PARALLEL_HPP_
#define ARRMIN_PARALLEL_HPP_

#include <algorithm>
#include <thread>
#include <vector>

namespace arrmin {

inline int default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(i) for i in [0, count) over contiguous index chunks. Each index
/// must write only to its own output slot; callers reduce slots in index
/// order afterwards, which keeps results identical for any thread count.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace arrmin

#endif  // ARRMIN_PARALLEL_HPP_
