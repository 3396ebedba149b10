#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace logfactor {

/// Raised when a prime index is requested beyond what the table is willing
/// to generate. Recoverable: construct a table with a larger cap.
class PrimeTableExhausted : public std::runtime_error {
 public:
  explicit PrimeTableExhausted(std::size_t index)
      : std::runtime_error("prime table exhausted at index " + std::to_string(index)),
        index(index) {}
  std::size_t index;
};

/// Prime lookup by level index with the convention used throughout:
/// prime(0) = 1 (the zero-energy ground level), prime(1) = 2, prime(2) = 3, ...
/// The underlying sieve grows on demand; growth is internally synchronized.
class PrimeTable {
 public:
  explicit PrimeTable(std::size_t max_index = 2'000'000) : max_index_(max_index) {}

  std::uint64_t prime(std::size_t index);

  /// Index of an exact prime value (or 1 -> 0); nullopt for composites.
  std::optional<std::size_t> index_of(std::uint64_t value);

  std::size_t generated() const;

  /// Process-wide shared table.
  static PrimeTable& shared();

 private:
  void grow_to(std::size_t index);  // caller holds lock

  mutable std::mutex mutex_;
  std::vector<std::uint64_t> primes_;  // primes_[0] = 2
  std::uint64_t sieved_up_to_ = 1;
  std::size_t max_index_;
};

/// Trial division up to sqrt(n); (prime, exponent) pairs in ascending order.
std::vector<std::pair<std::uint64_t, int>> prime_factorization(std::uint64_t n);

/// Number of prime factors counted with multiplicity.
int prime_factor_count(std::uint64_t n);

bool is_prime(std::uint64_t n);

}  // namespace logfactor
