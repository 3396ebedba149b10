#include "logfactor/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "logfactor/asymptotics.hpp"
#include "logfactor/degeneracy.hpp"
#include "logfactor/potential.hpp"

namespace logfactor {

std::string to_string(ProtocolMode mode) {
  switch (mode) {
    case ProtocolMode::iterative: return "iterative";
    case ProtocolMode::known_n: return "known-n";
    case ProtocolMode::prime_spectrum: return "prime-spectrum";
  }
  return "?";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::running: return "running";
    case Verdict::factored: return "factored";
    case Verdict::prime: return "prime";
    case Verdict::exhausted: return "exhausted";
    case Verdict::no_resonance: return "no-resonance";
  }
  return "?";
}

int ProtocolRun::successful_steps() const {
  int count = 0;
  for (const auto& step : steps) count += step.succeeded ? 1 : 0;
  return count;
}

int ProtocolRun::probe_steps() const {
  int count = 0;
  for (const auto& step : steps) count += step.resonant ? 0 : 1;
  return count;
}

nlohmann::ordered_json ProtocolRun::to_json() const {
  nlohmann::ordered_json j;
  j["mode"] = logfactor::to_string(mode);
  j["N"] = n_value;
  if (scale > 0) j["L"] = scale;
  if (bosons > 0) j["bosons"] = bosons;
  j["seed"] = seed;
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& step : steps) {
    nlohmann::ordered_json js;
    js["k"] = step.subsystems;
    js["encoded"] = step.encoded;
    js["omega_ext"] = step.omega_ext;
    js["gamma"] = step.gamma;
    js["Omega"] = step.rabi_frequency;
    js["d"] = step.degeneracy;
    js["resonant"] = step.resonant;
    js["succeeded"] = step.succeeded;
    js["attempts"] = nlohmann::ordered_json::array();
    for (const auto& attempt : step.attempts) {
      nlohmann::ordered_json ja;
      ja["t_m"] = attempt.time;
      ja["outcome"] = attempt.factor_found ? "factor" : "ground";
      ja["factors"] = attempt.factors;
      js["attempts"].push_back(std::move(ja));
    }
    js["measured_factors"] = step.measured_factors;
    j["steps"].push_back(std::move(js));
  }
  j["verdict"] = logfactor::to_string(verdict);
  j["confirmed_factors"] = confirmed_factors;
  j["factors_verified_prime"] = factors_verified_prime;
  if (verdict == Verdict::exhausted) j["residual_risk"] = residual_risk;
  if (mode == ProtocolMode::prime_spectrum) j["parity_check_passed"] = parity_check_passed;
  return j;
}

namespace {

bool exceeds_power(std::uint64_t n, std::uint64_t base, int exponent) {
  // n > base^exponent without overflow.
  std::uint64_t power = 1;
  for (int i = 0; i < exponent; ++i) {
    if (power > n / base) return false;
    power *= base;
  }
  return n > power;
}

struct StepSystem {
  RabiSystem system;
  StepRecord record;
};

/// Builds the drive step for (N, k). Couplings from the grid when available,
/// otherwise the uniform coupling model at the asymptotic scale.
StepSystem make_step(std::uint64_t n_value, int k, int scale, const ProtocolOptions& options) {
  StepSystem out;
  out.record.subsystems = k;
  out.record.encoded = n_value;

  if (!exceeds_power(n_value, static_cast<std::uint64_t>(scale), k)) {
    // ln(N/L^k) <= 0: nothing in the spectrum to address.
    return out;
  }
  auto spectrum = Spectrum::log_integer(scale);
  out.record.omega_ext = total_energy(spectrum, n_value, k).value;

  const double omega_target = options.gamma_safety / static_cast<double>(n_value);
  if (options.grid != nullptr) {
    // Couplings do not depend on gamma; rescale the unit-gamma system so that
    // Omega lands exactly on the policy target.
    out.system = build_rabi_system(*options.grid, n_value, k, scale, 1.0);
    if (out.system.resonant()) {
      out.system.gamma = omega_target / out.system.rabi_frequency;
      out.system.rabi_frequency = omega_target;
    } else {
      out.system.gamma = 0.0;
    }
  } else {
    auto decompositions = decompose_energy(spectrum, n_value, k);
    std::vector<BosonicConfig> states;
    for (const auto& levels : decompositions)
      states.emplace_back(std::vector<int>(levels.begin(), levels.end()));
    const std::size_t d = states.size();
    double w_model = 0.0, gamma = 0.0;
    if (d > 0) {
      w_model = matrix_element_asymptotic(static_cast<double>(n_value), k, scale);
      gamma = 2.0 * omega_target / (w_model * std::sqrt(static_cast<double>(d)));
    }
    out.system = assemble_rabi_system(n_value, k, SpectrumMode::log_integer, scale,
                                      out.record.omega_ext, gamma, std::move(states),
                                      std::vector<double>(d, w_model));
  }
  out.record.gamma = out.system.gamma;
  out.record.rabi_frequency = out.system.rabi_frequency;
  out.record.degeneracy = static_cast<std::size_t>(out.system.degeneracy());
  out.record.resonant = out.system.resonant();
  return out;
}

/// One measurement with the branch weights taken from the integrated
/// amplitudes at t_m; anything outside the tracked resonant branches counts
/// as a miss and forces a repetition.
MeasurementOutcome measure_full_dynamics(const RabiSystem& system, const PotentialGrid& grid,
                                         double t_m, Rng& rng) {
  IntegrateOptions opt;
  opt.t_end = t_m;
  opt.samples = 2;
  auto traj = integrate_full(system, grid, opt);
  std::vector<double> weights;
  weights.push_back(std::norm(traj.ground.back()));
  for (const auto& column : traj.factors) weights.push_back(std::norm(column.back()));
  weights.push_back(std::max(0.0, traj.norm.back() - weights[0] -
                                      std::accumulate(weights.begin() + 1, weights.end(), 0.0)));
  std::size_t pick = rng.categorical(weights);
  MeasurementOutcome outcome;
  outcome.time = t_m;
  if (pick >= 1 && pick <= system.factor_states.size()) {
    outcome.factor_found = true;
    outcome.state = system.factor_states[pick - 1];
    auto spectrum = Spectrum::log_integer(system.scale);
    for (int l : outcome.state.levels())
      outcome.factors.push_back(spectrum.decode_level(l));
  } else {
    outcome.state = BosonicConfig::ground(system.bosons);
  }
  return outcome;
}

/// Random-time attempts until a factor state shows up or repeats run out.
void run_attempts(StepSystem& step, const ProtocolOptions& options, Rng& rng) {
  const double window = options.omega_window / step.system.rabi_frequency;
  const bool full = options.full_dynamics;
  if (full && options.grid == nullptr)
    throw std::invalid_argument("full_dynamics needs exact couplings (set grid)");
  for (int attempt = 0; attempt < options.max_repeats; ++attempt) {
    MeasurementOutcome outcome =
        full ? measure_full_dynamics(step.system, *options.grid, rng.uniform(0.0, window), rng)
             : measure_random_time(step.system, window, rng);
    step.record.attempts.push_back({outcome.time, outcome.factor_found, outcome.factors});
    if (outcome.factor_found) {
      step.record.succeeded = true;
      step.record.measured_factors = outcome.factors;
      std::sort(step.record.measured_factors.begin(), step.record.measured_factors.end());
      return;
    }
  }
}

void finalize_factored(ProtocolRun& run, std::vector<std::uint64_t> factors) {
  std::sort(factors.begin(), factors.end());
  run.confirmed_factors = std::move(factors);
  std::uint64_t product = 1;
  bool all_prime = true;
  for (std::uint64_t f : run.confirmed_factors) {
    product *= f;
    all_prime = all_prime && is_prime(f);
  }
  run.factors_verified_prime = all_prime && product == run.n_value;
  run.verdict = Verdict::factored;
}

}  // namespace

ProtocolRun run_iterative(std::uint64_t n_value, int scale, const ProtocolOptions& options,
                          Rng& rng) {
  if (n_value < 2) throw std::invalid_argument("run_iterative: N must be >= 2");
  Spectrum::log_integer(scale);  // validates L
  for (std::uint64_t p = 2; p <= static_cast<std::uint64_t>(scale); ++p)
    if (is_prime(p) && n_value % p == 0)
      throw std::invalid_argument("run_iterative: N has the small factor " + std::to_string(p) +
                                  " <= L; strip it first");

  ProtocolRun run;
  run.mode = ProtocolMode::iterative;
  run.n_value = n_value;
  run.scale = scale;
  run.seed = rng.seed();

  for (int k = 2;; ++k) {
    StepSystem step = make_step(n_value, k, scale, options);
    if (!step.record.resonant) {
      run.steps.push_back(std::move(step.record));
      if (k == 2) {
        // The first probe already fails: the total energy is not a sum of two
        // level energies, which proves N prime.
        run.verdict = Verdict::prime;
      } else {
        finalize_factored(run, run.steps[run.steps.size() - 2].measured_factors);
      }
      return run;
    }
    run_attempts(step, options, rng);
    bool succeeded = step.record.succeeded;
    run.steps.push_back(std::move(step.record));
    if (!succeeded) {
      run.verdict = Verdict::exhausted;
      run.residual_risk = std::pow(0.5, options.max_repeats);
      return run;
    }
  }
}

ProtocolRun run_known_n(std::uint64_t n_value, int scale, int bosons,
                        const std::optional<std::vector<int>>& multiplicities,
                        const ProtocolOptions& options, Rng& rng) {
  if (n_value < 2) throw std::invalid_argument("run_known_n: N must be >= 2");
  if (bosons < 1) throw std::invalid_argument("run_known_n: n must be >= 1");
  Spectrum::log_integer(scale);
  if (multiplicities) {
    int total = 0;
    for (int nu : *multiplicities) total += nu;
    if (total != bosons)
      throw std::invalid_argument("run_known_n: multiplicities must sum to n");
  }

  ProtocolRun run;
  run.mode = ProtocolMode::known_n;
  run.n_value = n_value;
  run.scale = scale;
  run.bosons = bosons;
  run.seed = rng.seed();

  StepSystem step = make_step(n_value, bosons, scale, options);
  if (!step.record.resonant) {
    run.steps.push_back(std::move(step.record));
    run.verdict = Verdict::no_resonance;  // supplied n is inconsistent with N
    return run;
  }

  if (multiplicities) {
    MeasurementOutcome outcome = measure_at_pi_half(step.system);
    step.record.attempts.push_back({outcome.time, outcome.factor_found, outcome.factors});
    step.record.succeeded = true;
    step.record.measured_factors = outcome.factors;
    std::sort(step.record.measured_factors.begin(), step.record.measured_factors.end());
  } else {
    run_attempts(step, options, rng);
  }
  bool succeeded = step.record.succeeded;
  auto factors = step.record.measured_factors;
  run.steps.push_back(std::move(step.record));
  if (!succeeded) {
    run.verdict = Verdict::exhausted;
    run.residual_risk = std::pow(0.5, options.max_repeats);
    return run;
  }
  finalize_factored(run, std::move(factors));
  return run;
}

ProtocolRun run_prime_spectrum(std::uint64_t n_value, const ProtocolOptions& options, Rng& rng) {
  if (n_value < 2) throw std::invalid_argument("run_prime_spectrum: N must be >= 2");
  if (options.full_dynamics)
    throw std::invalid_argument("run_prime_spectrum: the two-tone drive has no full-dynamics path");

  ProtocolRun run;
  run.mode = ProtocolMode::prime_spectrum;
  run.n_value = n_value;
  run.scale = 0;
  run.seed = rng.seed();
  const int m = std::bit_width(n_value);  // floor(log2 N) + 1
  run.bosons = m;

  auto spectrum = Spectrum::prime();
  auto level_multiset = [&](std::uint64_t value) {
    auto decomposition = decompose_energy(spectrum, value, m);
    if (decomposition.empty())
      throw std::logic_error("run_prime_spectrum: boson budget too small");  // cannot happen
    return BosonicConfig(
        std::vector<int>(decomposition[0].begin(), decomposition[0].end()));
  };
  BosonicConfig state_n = level_multiset(n_value);
  BosonicConfig state_2n = level_multiset(2 * n_value);

  // The interaction preserves parity and the m-boson ground state is even, so
  // only the even member of the pair can be driven. Adding the factor 2 flips
  // the index sum by one, hence exactly one of them is even; verified anyway.
  run.parity_check_passed = state_n.is_even() != state_2n.is_even();
  const bool use_doubled = !state_n.is_even();
  const std::uint64_t encoded = use_doubled ? 2 * n_value : n_value;
  const BosonicConfig& target = use_doubled ? state_2n : state_n;

  StepRecord record;
  record.subsystems = m;
  record.encoded = encoded;
  record.omega_ext = std::log(static_cast<double>(encoded));
  record.degeneracy = 1;
  record.resonant = true;

  const double omega_target = options.gamma_safety / static_cast<double>(encoded);
  double coupling;
  if (options.grid != nullptr) {
    coupling = contact_matrix_element(*options.grid, BosonicConfig::ground(m), target);
  } else {
    // Stand-in scale for the coupling model; branch-free since d = 1.
    coupling = 1.0 / std::sqrt(static_cast<double>(encoded));
  }
  const double gamma = 2.0 * omega_target / std::abs(coupling);
  RabiSystem system = assemble_rabi_system(encoded, m, SpectrumMode::prime, 0,
                                           record.omega_ext, gamma, {target}, {coupling});
  record.gamma = system.gamma;
  record.rabi_frequency = system.rabi_frequency;

  StepSystem step{std::move(system), std::move(record)};
  run_attempts(step, options, rng);
  bool succeeded = step.record.succeeded;
  auto factors = step.record.measured_factors;
  run.steps.push_back(std::move(step.record));
  if (!succeeded) {
    run.verdict = Verdict::exhausted;
    run.residual_risk = std::pow(0.5, options.max_repeats);
    return run;
  }
  if (use_doubled) {
    // Drop the injected factor 2 that moved the target to the even state.
    auto it = std::find(factors.begin(), factors.end(), 2);
    if (it == factors.end())
      throw std::logic_error("run_prime_spectrum: doubled target without a factor 2");
    factors.erase(it);
  }
  finalize_factored(run, std::move(factors));
  if (run.confirmed_factors.size() == 1 && run.confirmed_factors[0] == n_value &&
      is_prime(n_value))
    run.verdict = Verdict::prime;
  return run;
}

}  // namespace logfactor
