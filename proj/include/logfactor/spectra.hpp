#pragma once

#include <cstdint>
#include <vector>

#include "logfactor/primes.hpp"

namespace logfactor {

enum class SpectrumMode { log_integer, prime };

/// Single-particle energy rule, in units of the trap quantum hw0.
///
/// log_integer: E_l = ln(l/L + 1) with odd scale L >= 3, so that sums of
/// level energies encode products of integers shifted by L.
/// prime: E_l = ln p_l over the primes, with p_0 = 1 giving E_0 = 0.
class Spectrum {
 public:
  static Spectrum log_integer(int scale);
  static Spectrum prime();

  SpectrumMode mode() const { return mode_; }
  int scale() const { return scale_; }  // L; meaningful in log_integer mode

  double energy(std::int64_t level) const;

  /// Integer the level decodes to: level + L (log_integer) or p_level (prime).
  std::uint64_t decode_level(std::int64_t level) const;

 private:
  Spectrum(SpectrumMode mode, int scale) : mode_(mode), scale_(scale) {}
  SpectrumMode mode_;
  int scale_;
};

/// Target k-subsystem energy hw0 ln(N/L^k) (log_integer) or hw0 ln N (prime).
struct TotalEnergy {
  std::uint64_t n_value;
  int subsystems;
  double value;
};

/// Throws std::domain_error in log_integer mode when N <= L^k (non-positive energy).
TotalEnergy total_energy(const Spectrum& spectrum, std::uint64_t n, int k);

/// All multisets {l_1..l_k} of spectrum levels whose energies sum to the total
/// energy of n, decided in exact integer arithmetic on the log arguments
/// (products are compared, never floating sums). Each vector is non-decreasing.
///
/// log_integer mode requires n free of prime factors <= L; throws otherwise.
/// An empty result is meaningful: no decomposition exists (e.g. n prime, k >= 2).
std::vector<std::vector<std::int64_t>> decompose_energy(const Spectrum& spectrum,
                                                        std::uint64_t n, int k);

}  // namespace logfactor
