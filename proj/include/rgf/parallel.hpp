/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <algorithm>
#include <thread>
#include <vector>

#include "rgf/types.hpp"

namespace rgf {

inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs f(i) for i in [0, n). Work is split into contiguous chunks, one per
// thread; iterations must write disjoint state.
template <typename F>
void parallel_for(Index n, int threads, F&& f) {
  threads = std::min<Index>(resolve_thread_count(threads), n);
  if (threads <= 1) {
    for (Index i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  const Index chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const Index begin = t * chunk;
    const Index end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &f] {
      for (Index i = begin; i < end; ++i) f(i);
    });
  }
}

}  // namespace rgf
