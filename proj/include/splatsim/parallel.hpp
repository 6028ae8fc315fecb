// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace splatsim {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(block) for block in [0, blocks). Work is assigned statically
// (block % threads) so results that merge per-thread state in thread order
// depend only on the thread count, never on scheduling.
template <typename Fn>
void parallel_blocks(int blocks, int threads, Fn&& fn) {
  threads = std::min(std::max(threads, 1), std::max(blocks, 1));
  if (threads <= 1 || blocks <= 1) {
    for (int b = 0; b < blocks; ++b) fn(b, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&fn, t, threads, blocks] {
      for (int b = t; b < blocks; b += threads) fn(b, t);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace splatsim
