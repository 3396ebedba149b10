#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logfactor/bosonic.hpp"
#include "logfactor/dynamics.hpp"
#include "logfactor/rng.hpp"

namespace logfactor {

struct MeasurementOutcome {
  double time = 0.0;
  bool factor_found = false;
  BosonicConfig state;                 // collapsed state (ground or one factor state)
  std::vector<std::uint64_t> factors;  // decoded integers; empty on ground outcome
};

/// Projective energy measurement at time t with the RWA branch weights
/// cos^2(Omega t) and (W_j^2 / sum W^2) sin^2(Omega t).
MeasurementOutcome measure_at(const RabiSystem& system, double t, Rng& rng);

/// Measurement at t ~ Uniform(0, window).
MeasurementOutcome measure_random_time(const RabiSystem& system, double window, Rng& rng);

/// Known-Rabi-frequency strategy: measures at t = pi/(2 Omega), which finds
/// the factor state with certainty within the RWA. Refuses systems with d > 1
/// (estimating Omega needs the multiplicities there).
MeasurementOutcome measure_at_pi_half(const RabiSystem& system);

/// Average probability to catch a factor state in a random-time measurement,
/// 1/2 - sin(2 Omega T)/(4 Omega T); returns the 0 limit at Omega T = 0.
double average_probability(double omega_t);

/// Shor benchmark: 1 - 2^(1-m) for m distinct prime factors.
double shor_success_probability(int distinct_primes);

/// One JSON line {"seed":..,"t_m":..,"outcome":..,"factors":[..]}.
std::string to_json_line(const MeasurementOutcome& outcome, std::uint64_t seed);

}  // namespace logfactor
