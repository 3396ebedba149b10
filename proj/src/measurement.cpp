#include "logfactor/measurement.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace logfactor {

namespace {

std::vector<std::uint64_t> decode_factors(const RabiSystem& system, const BosonicConfig& state) {
  std::vector<std::uint64_t> factors;
  if (system.mode == SpectrumMode::log_integer) {
    for (int l : state.levels())
      factors.push_back(static_cast<std::uint64_t>(l) + static_cast<std::uint64_t>(system.scale));
  } else {
    auto& table = PrimeTable::shared();
    for (int l : state.levels())
      if (l > 0) factors.push_back(table.prime(static_cast<std::size_t>(l)));
  }
  return factors;
}

}  // namespace

MeasurementOutcome measure_at(const RabiSystem& system, double t, Rng& rng) {
  MeasurementOutcome outcome;
  outcome.time = t;
  if (!system.resonant()) {
    outcome.state = BosonicConfig::ground(system.bosons);
    return outcome;
  }
  RwaState amps = rwa_amplitudes(system, t);
  std::vector<double> weights;
  weights.reserve(amps.factors.size() + 1);
  weights.push_back(amps.ground * amps.ground);
  for (double b : amps.factors) weights.push_back(b * b);
  std::size_t pick = rng.categorical(weights);
  if (pick == 0) {
    outcome.state = BosonicConfig::ground(system.bosons);
    return outcome;
  }
  outcome.factor_found = true;
  outcome.state = system.factor_states[pick - 1];
  outcome.factors = decode_factors(system, outcome.state);
  return outcome;
}

MeasurementOutcome measure_random_time(const RabiSystem& system, double window, Rng& rng) {
  if (window <= 0.0) throw std::invalid_argument("measure_random_time: window must be positive");
  return measure_at(system, rng.uniform(0.0, window), rng);
}

MeasurementOutcome measure_at_pi_half(const RabiSystem& system) {
  if (system.degeneracy() != 1)
    throw std::invalid_argument(
        "measure_at_pi_half: needs the non-degenerate d = 1 system (estimating the Rabi "
        "frequency requires the multiplicities otherwise)");
  if (system.rabi_frequency <= 0.0)
    throw std::invalid_argument("measure_at_pi_half: vanishing Rabi frequency");
  MeasurementOutcome outcome;
  outcome.time = 0.5 * std::numbers::pi / system.rabi_frequency;
  // sin^2(Omega t) = 1 there: the collapse is certain within the RWA.
  outcome.factor_found = true;
  outcome.state = system.factor_states.front();
  outcome.factors = decode_factors(system, outcome.state);
  return outcome;
}

double average_probability(double omega_t) {
  if (omega_t < 0.0) throw std::invalid_argument("average_probability: OmegaT must be >= 0");
  if (omega_t == 0.0) return 0.0;
  return 0.5 - std::sin(2.0 * omega_t) / (4.0 * omega_t);
}

double shor_success_probability(int distinct_primes) {
  if (distinct_primes < 1)
    throw std::invalid_argument("shor_success_probability: m must be >= 1");
  return 1.0 - std::pow(2.0, 1.0 - distinct_primes);
}

std::string to_json_line(const MeasurementOutcome& outcome, std::uint64_t seed) {
  nlohmann::ordered_json record;
  record["seed"] = seed;
  record["t_m"] = outcome.time;
  record["outcome"] = outcome.factor_found ? "factor" : "ground";
  record["state"] = outcome.state.levels();
  record["factors"] = outcome.factors;
  return record.dump();
}

}  // namespace logfactor
