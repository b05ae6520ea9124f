// Copyright 2026 The gfield Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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

namespace gfield {

namespace detail {
inline std::atomic<unsigned>& thread_cap() {
  static std::atomic<unsigned> cap{0};
  return cap;
}
}  // namespace detail

// 0 restores the default (hardware concurrency).
inline void set_max_threads(unsigned n) { detail::thread_cap() = n; }

inline unsigned max_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned cap = detail::thread_cap();
  return cap == 0 ? hw : cap;
}

// Calls fn(i) for every i in [0, n). Work is split into contiguous chunks;
// each index is visited exactly once, so results written per index do not
// depend on the worker count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(max_threads(), (n + 255) / 256);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  constexpr std::size_t kChunk = 256;
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    try {
      for (;;) {
        std::size_t begin = next.fetch_add(kChunk);
        if (begin >= n) break;
        std::size_t end = std::min(n, begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) fn(i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Pairwise summation in a fixed tree order; the result depends only on the
// input sequence.
template <class T>
T pairwise_sum(const T* data, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T acc = data[0];
    for (std::size_t i = 1; i < n; ++i) acc += data[i];
    return acc;
  }
  std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace gfield
