#include "lps/combinations.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace lps::combinations {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<Index> unrank(std::uint64_t rank, Index n, Index k) {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(k));
  Index next_min = 0;
  for (Index slot = 0; slot < k; ++slot) {
    for (Index v = next_min; v < n; ++v) {
      const std::uint64_t block =
          binomial(static_cast<std::uint64_t>(n - v - 1), static_cast<std::uint64_t>(k - slot - 1));
      if (rank < block) {
        out.push_back(v);
        next_min = v + 1;
        break;
      }
      rank -= block;
    }
  }
  return out;
}

bool next(std::vector<Index>& subset, Index n) {
  const Index k = static_cast<Index>(subset.size());
  Index i = k - 1;
  while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++subset[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < k; ++j) {
    subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

double max_over_subsets_serial(Index n, Index k, const SubsetVisitor& visit, double stop_at) {
  if (k <= 0 || k > n) return -HUGE_VAL;
  std::vector<Index> subset(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
  double best = -HUGE_VAL;
  do {
    best = std::max(best, visit(subset));
    if (best >= stop_at) break;
  } while (next(subset, n));
  return best;
}

double max_over_subsets(Index n, Index k, const SubsetVisitor& visit, double stop_at,
                        int threads) {
  if (k <= 0 || k > n) return -HUGE_VAL;
  const std::uint64_t total = binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  const std::int64_t chunks = static_cast<std::int64_t>(
      std::min<std::uint64_t>(total, static_cast<std::uint64_t>(nthreads) * 8));
  std::atomic<bool> stop{false};
  double best = -HUGE_VAL;

#pragma omp parallel for schedule(dynamic, 1) reduction(max : best) num_threads(nthreads)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t begin = total / chunks * c + std::min<std::uint64_t>(c, total % chunks);
    const std::uint64_t count = total / chunks + (static_cast<std::uint64_t>(c) < total % chunks ? 1 : 0);
    if (count == 0 || stop.load(std::memory_order_relaxed)) continue;
    std::vector<Index> subset = unrank(begin, n, k);
    for (std::uint64_t j = 0; j < count; ++j) {
      best = std::max(best, visit(subset));
      if (best >= stop_at) {
        stop.store(true, std::memory_order_relaxed);
        break;
      }
      if (j + 1 < count) next(subset, n);
    }
  }
  return best;
}

}  // namespace lps::combinations
