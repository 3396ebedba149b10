#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logfactor/dynamics.hpp"
#include "logfactor/measurement.hpp"
#include "logfactor/rng.hpp"

namespace logfactor {

class PotentialGrid;

enum class ProtocolMode { iterative, known_n, prime_spectrum };
enum class Verdict { running, factored, prime, exhausted, no_resonance };

std::string to_string(ProtocolMode mode);
std::string to_string(Verdict verdict);

struct AttemptRecord {
  double time = 0.0;
  bool factor_found = false;
  std::vector<std::uint64_t> factors;
};

struct StepRecord {
  int subsystems = 0;          // k
  std::uint64_t encoded = 0;   // product addressed by the drive
  double omega_ext = 0.0;
  double gamma = 0.0;
  double rabi_frequency = 0.0;
  std::size_t degeneracy = 0;
  bool resonant = false;
  bool succeeded = false;
  std::vector<AttemptRecord> attempts;  // every repetition, ground outcomes included
  std::vector<std::uint64_t> measured_factors;
};

struct ProtocolRun {
  ProtocolMode mode = ProtocolMode::iterative;
  std::uint64_t n_value = 0;
  int scale = 0;   // L (0 in prime-spectrum mode)
  int bosons = 0;  // fixed boson count for known_n / prime_spectrum
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  std::vector<std::uint64_t> confirmed_factors;  // sorted multiset
  Verdict verdict = Verdict::running;
  bool factors_verified_prime = false;  // post-hoc trial-division check
  double residual_risk = 0.0;           // P(false negative) after repeat exhaustion
  bool parity_check_passed = true;      // prime-spectrum N/2N parity claim

  int successful_steps() const;
  int probe_steps() const;

  nlohmann::ordered_json to_json() const;
};

struct ProtocolOptions {
  /// Couplings come from contact elements on this grid when set; when null, a
  /// positive coupling model stands in (every admissible factor state is
  /// weighted equally and the overall scale follows the closed-form
  /// asymptotics), which leaves the decoded factors and verdicts unchanged.
  const PotentialGrid* grid = nullptr;

  double gamma_safety = 0.05;  // per step, gamma is set so Omega = safety/N
  double omega_window = 50.0;  // measurement window as Omega * T
  int max_repeats = 40;

  /// Collapse random-time measurements on the full coupled dynamics instead
  /// of the closed-form amplitudes. Needs `grid`; log-integer modes only
  /// (the two-tone prime-spectrum drive has no full-dynamics path). A branch
  /// outside {ground, factor states} counts as a failed attempt.
  bool full_dynamics = false;
};

/// The stepwise protocol: k = 2, 3, ... with drive frequency ln(N/L^k); each
/// resonant step is measured at random times until a factor state appears;
/// the first non-resonant probe terminates the run. Requires N free of prime
/// factors <= L.
ProtocolRun run_iterative(std::uint64_t n_value, int scale, const ProtocolOptions& options,
                          Rng& rng);

/// Single step at k = n. With multiplicities the measurement happens at
/// t = pi/(2 Omega) and succeeds with certainty (within the RWA); without,
/// random-time attempts at ~1/2 success probability each.
ProtocolRun run_known_n(std::uint64_t n_value, int scale, int bosons,
                        const std::optional<std::vector<int>>& multiplicities,
                        const ProtocolOptions& options, Rng& rng);

/// Prime-spectrum protocol: m = floor(log2 N) + 1 bosons, a two-tone drive at
/// ln N and ln 2N of which exactly one addresses an even state; a single
/// random-time measurement round recovers all prime factors.
ProtocolRun run_prime_spectrum(std::uint64_t n_value, const ProtocolOptions& options, Rng& rng);

}  // namespace logfactor
