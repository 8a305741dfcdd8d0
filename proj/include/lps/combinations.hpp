#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lps/types.hpp"

namespace lps::combinations {

/// Binomial coefficient C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

/// The `rank`-th k-subset of {0..n-1} in lexicographic order.
std::vector<Index> unrank(std::uint64_t rank, Index n, Index k);

/// Advances `subset` to its lexicographic successor; false when exhausted.
bool next(std::vector<Index>& subset, Index n);

/// Visitor returns a value; the reduction keeps the maximum. Used for both the
/// "all subsets pass" check (visitor returns 0/1 failure flag) and RIP.
using SubsetVisitor = std::function<double(const std::vector<Index>&)>;

/// Serial reference: max over all k-subsets of visit(subset). Stops early once
/// a value >= stop_at is seen.
double max_over_subsets_serial(Index n, Index k, const SubsetVisitor& visit,
                               double stop_at = HUGE_VAL);

/// OpenMP version of max_over_subsets_serial: contiguous rank chunks per
/// thread, each started by unranking. Result equals the serial one since max is
/// order-independent. `threads` <= 0 uses the OpenMP default.
double max_over_subsets(Index n, Index k, const SubsetVisitor& visit,
                        double stop_at = HUGE_VAL, int threads = 0);

}  // namespace lps::combinations
