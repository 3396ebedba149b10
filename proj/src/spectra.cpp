#include "logfactor/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "logfactor/degeneracy.hpp"

namespace logfactor {

Spectrum Spectrum::log_integer(int scale) {
  // Odd L keeps every factor level q - L even, so the parity selection rule
  // never kills a factor-state coupling; L >= 3 keeps unity out of the
  // encoded products.
  if (scale < 3 || scale % 2 == 0)
    throw std::invalid_argument("Spectrum: scale parameter L must be odd and >= 3");
  return Spectrum(SpectrumMode::log_integer, scale);
}

Spectrum Spectrum::prime() { return Spectrum(SpectrumMode::prime, 0); }

double Spectrum::energy(std::int64_t level) const {
  if (level < 0) throw std::invalid_argument("Spectrum::energy: level must be >= 0");
  if (mode_ == SpectrumMode::log_integer)
    return std::log(static_cast<double>(level) / scale_ + 1.0);
  return std::log(static_cast<double>(PrimeTable::shared().prime(static_cast<std::size_t>(level))));
}

std::uint64_t Spectrum::decode_level(std::int64_t level) const {
  if (level < 0) throw std::invalid_argument("Spectrum::decode_level: level must be >= 0");
  if (mode_ == SpectrumMode::log_integer) return static_cast<std::uint64_t>(level + scale_);
  return PrimeTable::shared().prime(static_cast<std::size_t>(level));
}

TotalEnergy total_energy(const Spectrum& spectrum, std::uint64_t n, int k) {
  if (n < 2) throw std::invalid_argument("total_energy: n must be >= 2");
  if (k < 1) throw std::invalid_argument("total_energy: k must be >= 1");
  if (spectrum.mode() == SpectrumMode::log_integer) {
    // N > L^k, checked in integers.
    std::uint64_t power = 1;
    for (int i = 0; i < k; ++i) {
      if (power > n / spectrum.scale()) throw std::domain_error("total_energy: n <= L^k");
      power *= static_cast<std::uint64_t>(spectrum.scale());
    }
    if (n <= power) throw std::domain_error("total_energy: n <= L^k");
    return {n, k, std::log(static_cast<double>(n) / static_cast<double>(power))};
  }
  return {n, k, std::log(static_cast<double>(n))};
}

std::vector<std::vector<std::int64_t>> decompose_energy(const Spectrum& spectrum,
                                                        std::uint64_t n, int k) {
  if (n < 2) throw std::invalid_argument("decompose_energy: n must be >= 2");
  if (k < 1) throw std::invalid_argument("decompose_energy: k must be >= 1");

  std::vector<std::vector<std::int64_t>> result;

  if (spectrum.mode() == SpectrumMode::log_integer) {
    const int L = spectrum.scale();
    for (const auto& [p, e] : prime_factorization(n))
      if (p <= static_cast<std::uint64_t>(L))
        throw std::invalid_argument("decompose_energy: n has a prime factor <= L");
    // Sum of energies ln((l_i+L)/L) equals ln(N/L^k) iff prod (l_i+L) = N,
    // so decompositions are exactly the k-part factorizations with parts > L.
    auto set = enumerate_factorizations(n, k, static_cast<std::uint64_t>(L) + 1);
    result.reserve(set.solutions.size());
    for (const auto& parts : set.solutions) {
      std::vector<std::int64_t> levels(parts.size());
      std::transform(parts.begin(), parts.end(), levels.begin(),
                     [L](std::uint64_t q) { return static_cast<std::int64_t>(q) - L; });
      result.push_back(std::move(levels));
    }
    return result;
  }

  // Prime mode: levels are prime indices, the ground level decodes to 1, so a
  // decomposition is the prime multiset of n padded with zeros. It exists iff
  // n has at most k prime factors, and is then unique.
  auto factors = prime_factorization(n);
  int count = 0;
  for (const auto& [p, e] : factors) count += e;
  if (count > k) return result;
  std::vector<std::int64_t> levels;
  levels.reserve(k);
  for (int i = 0; i < k - count; ++i) levels.push_back(0);
  auto& table = PrimeTable::shared();
  for (const auto& [p, e] : factors) {
    auto idx = table.index_of(p);
    for (int i = 0; i < e; ++i) levels.push_back(static_cast<std::int64_t>(*idx));
  }
  std::sort(levels.begin(), levels.end());
  result.push_back(std::move(levels));
  return result;
}

}  // namespace logfactor
