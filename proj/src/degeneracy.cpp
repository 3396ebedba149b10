#include "logfactor/degeneracy.hpp"

#include <limits>
#include <stdexcept>

namespace logfactor {

namespace {

void descend(std::uint64_t n, int parts, std::uint64_t lo,
             std::vector<std::uint64_t>& prefix,
             std::vector<std::vector<std::uint64_t>>& out) {
  if (parts == 1) {
    if (n >= lo) {
      prefix.push_back(n);
      out.push_back(prefix);
      prefix.pop_back();
    }
    return;
  }
  // The smallest part d satisfies d^parts <= n.
  for (std::uint64_t d = lo; d * d <= n; ++d) {
    if (n % d != 0) continue;
    bool fits = true;
    std::uint64_t power = d;
    for (int i = 1; i < parts; ++i) {
      if (power > n / d) { fits = false; break; }
      power *= d;
    }
    if (!fits) break;
    prefix.push_back(d);
    descend(n / d, parts - 1, d, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

FactorizationSet enumerate_factorizations(std::uint64_t n, int parts, std::uint64_t min_part) {
  if (n < 2) throw std::invalid_argument("enumerate_factorizations: n must be >= 2");
  if (parts < 1) throw std::invalid_argument("enumerate_factorizations: parts must be >= 1");
  FactorizationSet set;
  set.n = n;
  set.parts = parts;
  set.min_part = min_part < 2 ? 2 : min_part;
  std::vector<std::uint64_t> prefix;
  prefix.reserve(parts);
  descend(n, parts, set.min_part, prefix, set.solutions);
  return set;
}

std::uint64_t stirling_count(int n, int k) {
  if (k < 0 || n < 0 || k > n) throw std::invalid_argument("stirling_count: need 0 <= k <= n");
  if (n == 0) return 1;  // S(0,0) = 1
  if (k == 0) return 0;
  std::vector<std::uint64_t> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;  // S(0,0)
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) {
      std::uint64_t a = row[j];  // S(i-1, j)
      std::uint64_t b = row[j - 1];
      if (a != 0 && static_cast<std::uint64_t>(j) > (std::numeric_limits<std::uint64_t>::max() - b) / a)
        throw std::overflow_error("stirling_count: result exceeds 64 bits");
      row[j] = static_cast<std::uint64_t>(j) * a + b;
    }
    row[0] = 0;  // S(i, 0) = 0 for i >= 1
  }
  return row[k];
}

std::uint64_t partition_count_diff(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("partition_count_diff: need 1 <= k <= n");
  // p[j] accumulates partitions of each value into parts of size <= current k.
  auto at_most = [n](int kk) {
    std::vector<std::uint64_t> p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = 1;
    for (int part = 1; part <= kk; ++part)
      for (int v = part; v <= n; ++v) p[v] += p[v - part];
    return p[n];
  };
  // Partitions into at most k parts equal partitions into parts of size <= k
  // (conjugate diagrams).
  return at_most(k) - (k >= 1 ? at_most(k - 1) : 0);
}

}  // namespace logfactor
