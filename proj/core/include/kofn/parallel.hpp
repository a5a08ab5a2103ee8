#pragma once

#include <algorithm>
#include <cstddef>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "kofn/random.hpp"

namespace kofn {

struct ParallelOptions {
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

// Number of samples handled by worker `w` when `total` samples are split
// across `workers` workers. The split depends only on (total, workers).
constexpr std::size_t worker_share(std::size_t total, unsigned workers,
                                   unsigned w) noexcept {
  const std::size_t base = total / workers;
  return base + (w < total % workers ? 1 : 0);
}

// Runs body(rng, count) -> Acc on each worker with its own RNG stream and
// merges results in worker order. The output is a deterministic function of
// (seed, workers, total).
template <class Acc, class Body>
Acc parallel_accumulate(std::size_t total, const ParallelOptions& options,
                        Body body) {
  const unsigned workers = options.workers == 0 ? 1 : options.workers;
  std::vector<Acc> partial(workers);
  auto run = [&](unsigned w) {
    Rng rng = make_stream(options.seed, w);
    partial[w] = body(rng, worker_share(total, workers, w));
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  Acc result = std::move(partial[0]);
  for (unsigned w = 1; w < workers; ++w) result.merge(partial[w]);
  return result;
}

// Calls fn(i) for i in [0, count) on up to `workers` threads. Work items
// must write to disjoint outputs; the schedule does not affect results.
template <class Fn>
void parallel_for_index(std::size_t count, unsigned workers, Fn fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  auto drain = [&] {
    for (std::size_t i = cursor++; i < count; i = cursor++) fn(i);
  };
  std::vector<std::jthread> pool;
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(drain);
}

}  // namespace kofn
