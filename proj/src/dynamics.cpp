#include "logfactor/dynamics.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "logfactor/potential.hpp"

namespace logfactor {

RabiSystem build_rabi_system(const PotentialGrid& grid, std::uint64_t n_value, int k,
                             int scale, double gamma) {
  if (k < 1) throw std::invalid_argument("build_rabi_system: k must be >= 1");
  if (gamma < 0.0) throw std::invalid_argument("build_rabi_system: gamma must be >= 0");
  auto spectrum = Spectrum::log_integer(scale);
  auto total = total_energy(spectrum, n_value, k);  // enforces N > L^k

  RabiSystem system;
  system.encoded = n_value;
  system.bosons = k;
  system.mode = SpectrumMode::log_integer;
  system.scale = scale;
  system.omega_ext = total.value;
  system.gamma = gamma;

  const auto ground = BosonicConfig::ground(k);
  for (const auto& levels : decompose_energy(spectrum, n_value, k)) {
    std::vector<int> small(levels.begin(), levels.end());
    BosonicConfig state(std::move(small));
    system.couplings.push_back(contact_matrix_element(grid, ground, state));
    system.factor_states.push_back(std::move(state));
  }
  double sum_sq = 0.0;
  for (double w : system.couplings) sum_sq += w * w;
  system.rabi_frequency = 0.5 * gamma * std::sqrt(sum_sq);
  return system;
}

RabiSystem assemble_rabi_system(std::uint64_t encoded, int bosons, SpectrumMode mode,
                                int scale, double omega_ext, double gamma,
                                std::vector<BosonicConfig> factor_states,
                                std::vector<double> couplings) {
  if (factor_states.size() != couplings.size())
    throw std::invalid_argument("assemble_rabi_system: states/couplings size mismatch");
  RabiSystem system;
  system.encoded = encoded;
  system.bosons = bosons;
  system.mode = mode;
  system.scale = scale;
  system.omega_ext = omega_ext;
  system.gamma = gamma;
  system.factor_states = std::move(factor_states);
  system.couplings = std::move(couplings);
  double sum_sq = 0.0;
  for (double w : system.couplings) sum_sq += w * w;
  system.rabi_frequency = 0.5 * gamma * std::sqrt(sum_sq);
  return system;
}

RwaState rwa_amplitudes(const RabiSystem& system, double t) {
  RwaState state;
  if (!system.resonant()) {
    state.ground = 1.0;
    return state;
  }
  double sum_sq = 0.0;
  for (double w : system.couplings) sum_sq += w * w;
  const double root = std::sqrt(sum_sq);
  const double omega_t = system.rabi_frequency * t;
  state.ground = std::cos(omega_t);
  state.factors.resize(system.couplings.size());
  for (std::size_t j = 0; j < system.couplings.size(); ++j)
    state.factors[j] = system.couplings[j] / root * std::sin(omega_t);
  return state;
}

namespace {

using complex_state = std::vector<std::complex<double>>;

std::vector<BosonicConfig> enumerate_basis(int bosons, int cutoff) {
  std::vector<BosonicConfig> basis;
  std::vector<int> tuple(static_cast<std::size_t>(bosons), 0);
  while (true) {
    basis.emplace_back(tuple);
    int i = bosons - 1;
    while (i >= 0 && tuple[static_cast<std::size_t>(i)] == cutoff) --i;
    if (i < 0) break;
    int next = tuple[static_cast<std::size_t>(i)] + 1;
    for (int j = i; j < bosons; ++j) tuple[static_cast<std::size_t>(j)] = next;
  }
  return basis;
}

}  // namespace

AmplitudeTrajectory integrate_full(const RabiSystem& system, const PotentialGrid& grid,
                                   const IntegrateOptions& options) {
  namespace odeint = boost::numeric::odeint;
  if (system.mode != SpectrumMode::log_integer)
    throw std::invalid_argument("integrate_full: only the single-drive log-integer form is handled");

  int max_factor_level = 0;
  for (const auto& state : system.factor_states)
    max_factor_level = std::max(max_factor_level, state.levels().back());
  const int cutoff = options.basis_cutoff >= 0 ? options.basis_cutoff : max_factor_level + 8;
  if (cutoff >= grid.levels())
    throw std::out_of_range("integrate_full: basis cutoff " + std::to_string(cutoff) +
                            " exceeds grid levels " + std::to_string(grid.levels()));

  double t_end = options.t_end;
  if (t_end <= 0.0) {
    if (system.rabi_frequency <= 0.0)
      throw std::invalid_argument("integrate_full: t_end required for a non-resonant system");
    t_end = 2.0 * std::numbers::pi / system.rabi_frequency;
  }

  const auto basis = enumerate_basis(system.bosons, cutoff);
  const std::size_t dim = basis.size();

  std::vector<double> energy(dim, 0.0), perm(dim, 0.0);
  std::vector<bool> touches_cutoff(dim, false);
  std::size_t ground_index = dim;
  for (std::size_t i = 0; i < dim; ++i) {
    for (int l : basis[i].levels()) energy[i] += grid.eigenvalues()[static_cast<std::size_t>(l)];
    perm[i] = basis[i].permutation_count();
    touches_cutoff[i] = basis[i].levels().back() == cutoff;
    if (basis[i].level_sum() == 0) ground_index = i;
  }

  std::vector<std::size_t> factor_index;
  std::vector<double> factor_norm;
  for (const auto& state : system.factor_states) {
    auto it = std::find(basis.begin(), basis.end(), state);
    if (it == basis.end()) throw std::logic_error("integrate_full: factor state outside basis");
    factor_index.push_back(static_cast<std::size_t>(it - basis.begin()));
    factor_norm.push_back(state.normalization());
  }

  // a[m][n] = perm(n) * <m| v |n>, ordinary product-state elements.
  std::vector<double> coupling(dim * dim, 0.0);
  for (std::size_t m = 0; m < dim; ++m) {
    for (std::size_t n = m; n < dim; ++n) {
      if ((basis[m].level_sum() + basis[n].level_sum()) % 2 != 0) continue;
      double w = overlap_integral(grid, basis[m], basis[n]);
      coupling[m * dim + n] = w;
      coupling[n * dim + m] = w;
    }
  }

  const double gamma = system.gamma;
  const double omega = system.omega_ext;
  std::vector<std::complex<double>> phases(dim), shifted(dim);
  auto rhs = [&](const complex_state& b, complex_state& dbdt, double t) {
    const double drive = gamma * std::sin(omega * t);
    for (std::size_t n = 0; n < dim; ++n) {
      phases[n] = std::polar(1.0, -energy[n] * t);
      shifted[n] = perm[n] * phases[n] * b[n];
    }
    for (std::size_t m = 0; m < dim; ++m) {
      std::complex<double> acc{0.0, 0.0};
      const double* row = &coupling[m * dim];
      for (std::size_t n = 0; n < dim; ++n) acc += row[n] * shifted[n];
      dbdt[m] = std::complex<double>(0.0, -drive) * std::conj(phases[m]) * acc;
    }
  };

  complex_state b(dim, {0.0, 0.0});
  b[ground_index] = 1.0;

  AmplitudeTrajectory traj;
  traj.basis_size = dim;
  const int samples = std::max(options.samples, 2);
  traj.times.reserve(static_cast<std::size_t>(samples) + 1);
  traj.ground.reserve(static_cast<std::size_t>(samples) + 1);
  traj.factors.resize(factor_index.size());

  auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol,
                                         odeint::runge_kutta_dopri5<complex_state>());
  double t = 0.0;
  double dt = t_end / (samples * 8.0);
  auto record = [&](double time) {
    traj.times.push_back(time);
    traj.ground.push_back(b[ground_index]);
    for (std::size_t j = 0; j < factor_index.size(); ++j)
      traj.factors[j].push_back(b[factor_index[j]] / factor_norm[j]);
    double norm = 0.0, edge = 0.0;
    for (std::size_t n = 0; n < dim; ++n) {
      double p = perm[n] * std::norm(b[n]);
      norm += p;
      if (touches_cutoff[n]) edge += p;
    }
    traj.norm.push_back(norm);
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(norm - 1.0));
    traj.max_edge_population = std::max(traj.max_edge_population, edge);
  };
  record(0.0);
  for (int s = 1; s <= samples; ++s) {
    double t_next = t_end * s / samples;
    odeint::integrate_adaptive(stepper, rhs, b, t, t_next, dt);
    t = t_next;
    record(t);
  }
  traj.leakage_warning = traj.max_norm_drift > 1e-4;
  return traj;
}

void AmplitudeTrajectory::write_csv(std::ostream& out) const {
  out << "t,re_b0,im_b0,prob_ground,prob_factor_total";
  for (std::size_t j = 0; j < factors.size(); ++j) out << ",prob_factor_" << j;
  out << ",norm\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << times[i] << ',' << ground[i].real() << ',' << ground[i].imag() << ','
        << std::norm(ground[i]);
    double total = 0.0;
    for (const auto& column : factors) total += std::norm(column[i]);
    out << ',' << total;
    for (const auto& column : factors) out << ',' << std::norm(column[i]);
    out << ',' << norm[i] << '\n';
  }
}

}  // namespace logfactor
