#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "numerics.hpp"

namespace edgelab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

/// Generator for path `index` of a run seeded with `seed`; independent of thread layout.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(index)))};
  return Rng(seq);
}

/// Calls fn(i) for i in [0, n) on `threads` workers in contiguous blocks.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct MCEstimate {
  double mean = 0;
  double std_error = 0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

inline MCEstimate summarize(const std::vector<double>& x, std::uint64_t seed) {
  MCEstimate e;
  e.n_samples = x.size();
  e.seed = seed;
  if (x.empty()) return e;
  e.mean = pairwise_sum(x) / x.size();
  if (x.size() > 1) {
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = (x[i] - e.mean) * (x[i] - e.mean);
    e.std_error = std::sqrt(pairwise_sum(d) / (x.size() - 1) / x.size());
  }
  return e;
}

/// Deterministic MC run: values[i] = sample(i, rng_i), reduced in index order.
template <class Sample>
std::vector<double> run_samples(std::size_t n, std::uint64_t seed, int threads, Sample&& sample) {
  std::vector<double> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    Rng g = stream_rng(seed, i);
    out[i] = sample(i, g);
  });
  return out;
}

}  // namespace edgelab
