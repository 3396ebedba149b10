#pragma once

#include <cstdint>
#include <vector>

namespace logfactor {

/// All unordered representations N = q_1 * ... * q_k with every part >= min_part.
struct FactorizationSet {
  std::uint64_t n = 0;
  int parts = 0;
  std::uint64_t min_part = 2;
  std::vector<std::vector<std::uint64_t>> solutions;  // non-decreasing tuples

  std::size_t count() const { return solutions.size(); }
};

/// Exhaustive, duplicate-free enumeration by recursive divisor descent: each
/// recursion level picks the smallest remaining part, so tuples come out
/// non-decreasing and no multiset appears twice. Empty set is a valid result.
FactorizationSet enumerate_factorizations(std::uint64_t n, int parts, std::uint64_t min_part);

/// Stirling number of the second kind via S(n,k) = k S(n-1,k) + S(n-1,k-1).
/// Requires 0 <= k <= n; overflow-checked for desk-scale arguments.
std::uint64_t stirling_count(int n, int k);

/// p_k(n) - p_{k-1}(n) with p_k(n) = number of partitions of n into at most
/// k parts, i.e. the number of partitions of n into exactly k parts.
std::uint64_t partition_count_diff(int n, int k);

}  // namespace logfactor
