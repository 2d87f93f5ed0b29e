// SPDX-License-Identifier: Apache-2.0
//
// Index-parallel loop. Each index writes only its own result slot, so output
// is independent of the worker count. Internal header.
//
#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bacc {

template <typename Fn> void parallel_for(size_t count, unsigned jobs, Fn &&fn) {
  const size_t workers = std::min<size_t>(std::max(1u, jobs), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  size_t first_index = count;
  std::mutex error_mutex;
  auto body = [&] {
    for (size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        // Report the lowest failing index so errors are deterministic too.
        std::lock_guard lock(error_mutex);
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w)
    pool.emplace_back(body);
  for (auto &t : pool)
    t.join();
  if (first_error)
    std::rethrow_exception(first_error);
}

} // namespace bacc
