// Copyright 2026 The freqlink Authors
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
#include <cstdint>
#include <thread>
#include <vector>

namespace freqlink {

/// Runs fn(trial_index) for every index in [0, count) over `workers`
/// threads, contiguous blocks per worker. Results must be communicated
/// through per-trial slots or per-worker accumulators; combined with
/// per-trial rng streams this keeps outputs independent of the worker count.
template <class Fn>
void parallel_for_trials(std::uint64_t count, int workers, Fn&& fn) {
  if (workers < 1) workers = 1;
  if (workers == 1 || count < 2) {
    for (std::uint64_t t = 0; t < count; ++t) fn(t);
    return;
  }
  const auto w = static_cast<std::uint64_t>(workers);
  std::vector<std::thread> threads;
  threads.reserve(w);
  const std::uint64_t block = (count + w - 1) / w;
  for (std::uint64_t i = 0; i < w; ++i) {
    const std::uint64_t lo = i * block;
    const std::uint64_t hi = std::min(count, lo + block);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &fn] {
      for (std::uint64_t t = lo; t < hi; ++t) fn(t);
    });
  }
  for (auto& th : threads) th.join();
}

/// Integer tally over trials; addition commutes, so the result is exact and
/// independent of scheduling and worker count.
template <class Fn>
std::uint64_t parallel_tally(std::uint64_t count, int workers, Fn&& per_trial) {
  if (workers < 1) workers = 1;
  const auto w = static_cast<std::uint64_t>(workers);
  std::vector<std::uint64_t> partial(w, 0);
  const std::uint64_t block = (count + w - 1) / w;
  std::vector<std::thread> threads;
  for (std::uint64_t i = 0; i < w; ++i) {
    const std::uint64_t lo = i * block;
    const std::uint64_t hi = std::min(count, lo + block);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, i, &partial, &per_trial] {
      std::uint64_t acc = 0;
      for (std::uint64_t t = lo; t < hi; ++t) acc += per_trial(t);
      partial[i] = acc;
    });
  }
  for (auto& th : threads) th.join();
  std::uint64_t total = 0;
  for (std::uint64_t v : partial) total += v;
  return total;
}

/// Per-trial doubles, filled in parallel, reduced by the caller in trial
/// order so floating-point sums do not depend on the worker count.
template <class Fn>
std::vector<double> parallel_map_doubles(std::uint64_t count, int workers, Fn&& per_trial) {
  std::vector<double> values(count);
  parallel_for_trials(count, workers, [&](std::uint64_t t) { values[t] = per_trial(t); });
  return values;
}

}  // namespace freqlink
