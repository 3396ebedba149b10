#include "logfactor/primes.hpp"

#include <algorithm>
#include <cmath>

namespace logfactor {

std::uint64_t PrimeTable::prime(std::size_t index) {
  if (index == 0) return 1;
  std::lock_guard lock(mutex_);
  if (index > max_index_) throw PrimeTableExhausted(index);
  grow_to(index);
  return primes_[index - 1];
}

std::optional<std::size_t> PrimeTable::index_of(std::uint64_t value) {
  if (value == 1) return 0;
  if (value < 2) return std::nullopt;
  std::lock_guard lock(mutex_);
  while (sieved_up_to_ < value) {
    if (primes_.size() >= max_index_) throw PrimeTableExhausted(primes_.size() + 1);
    grow_to(std::max<std::size_t>(primes_.size() * 2, 64));
  }
  auto it = std::lower_bound(primes_.begin(), primes_.end(), value);
  if (it == primes_.end() || *it != value) return std::nullopt;
  return static_cast<std::size_t>(it - primes_.begin()) + 1;
}

std::size_t PrimeTable::generated() const {
  std::lock_guard lock(mutex_);
  return primes_.size();
}

PrimeTable& PrimeTable::shared() {
  static PrimeTable table;
  return table;
}

void PrimeTable::grow_to(std::size_t index) {
  while (primes_.size() < index) {
    // Sieve the next segment; p_n < n (ln n + ln ln n) for n >= 6 bounds the
    // needed range, doubling keeps the amortized cost linear-ish.
    std::uint64_t lo = sieved_up_to_ + 1;
    std::uint64_t hi = std::max<std::uint64_t>(sieved_up_to_ * 2, 1024);
    if (index >= 6) {
      double n = static_cast<double>(index);
      auto bound = static_cast<std::uint64_t>(n * (std::log(n) + std::log(std::log(n)))) + 16;
      hi = std::max(hi, bound);
    }
    std::vector<bool> composite(hi - lo + 1, false);
    for (std::uint64_t p = 2; p * p <= hi; ++p) {
      bool p_prime = true;
      for (std::uint64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) { p_prime = false; break; }
      if (!p_prime) continue;
      std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
      for (std::uint64_t m = start; m <= hi; m += p) composite[m - lo] = true;
    }
    for (std::uint64_t v = std::max<std::uint64_t>(lo, 2); v <= hi; ++v)
      if (!composite[v - lo]) primes_.push_back(v);
    sieved_up_to_ = hi;
  }
}

std::vector<std::pair<std::uint64_t, int>> prime_factorization(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> factors;
  if (n < 2) return factors;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    factors.emplace_back(p, e);
  }
  if (n > 1) factors.emplace_back(n, 1);
  return factors;
}

int prime_factor_count(std::uint64_t n) {
  int count = 0;
  for (const auto& [p, e] : prime_factorization(n)) count += e;
  return count;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

}  // namespace logfactor
