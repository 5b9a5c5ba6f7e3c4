#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace equidist {

// Thread budget for the data-parallel loops. Results never depend on it:
// every parallel loop writes into per-index slots that are reduced in a
// fixed order afterwards.
struct Exec {
  unsigned threads = 1;
};

// Blocked pairwise summation. The reduction tree depends only on the length
// of the input, so the result is bit-stable for a given ordering.
inline double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t block = 16;
  if (v.size() <= block) {
    double s = 0.0;
    for (double x : v)
      s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(std::span<const double>(v));
}

// Runs body(i) for i in [0, n). Indices are dealt out in contiguous chunks;
// body must only write state owned by index i.
template <class Body>
void parallel_for(std::size_t n, Exec exec, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, exec.threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  // Interleaved assignment balances triangular pair loops.
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers)
        body(i);
    });
  }
  for (auto& th : pool)
    th.join();
}

// Row-wise reduction used by all pair sums: row(i, scratch) pushes the terms
// of row i into scratch, the row is pairwise-summed, and the row totals are
// pairwise-summed in index order.
template <class Row>
double reduce_rows(std::size_t n, Exec exec, Row&& row) {
  std::vector<double> totals(n, 0.0);
  const unsigned workers = std::max(1u, exec.threads);
  std::vector<std::vector<double>> scratch(workers);
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) {
      scratch[0].clear();
      row(i, scratch[0]);
      totals[i] = pairwise_sum(scratch[0]);
    }
    return pairwise_sum(totals);
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      auto& buf = scratch[w];
      for (std::size_t i = w; i < n; i += workers) {
        buf.clear();
        row(i, buf);
        totals[i] = pairwise_sum(buf);
      }
    });
  }
  for (auto& th : pool)
    th.join();
  return pairwise_sum(totals);
}

} // namespace equidist
