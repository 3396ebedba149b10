#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "logfactor/bosonic.hpp"
#include "logfactor/spectra.hpp"

namespace logfactor {

class PotentialGrid;

/// Reduced resonant system of one drive step: the k-boson ground state, the d
/// factor states the drive frequency addresses, and their contact couplings.
struct RabiSystem {
  std::uint64_t encoded = 0;  // product the factor states decode to
  int bosons = 0;             // k
  SpectrumMode mode = SpectrumMode::log_integer;
  int scale = 0;              // L (log_integer mode)
  double omega_ext = 0.0;     // omega0 units
  double gamma = 0.0;         // drive strength, hw0 units
  std::vector<BosonicConfig> factor_states;
  std::vector<double> couplings;  // bosonic W_{0, q_j - L}
  double rabi_frequency = 0.0;    // Omega_k = gamma/2 sqrt(sum W^2)

  int degeneracy() const { return static_cast<int>(factor_states.size()); }
  bool resonant() const { return !factor_states.empty(); }
};

/// Resonant system for drive frequency omega0 ln(N/L^k): factor states are the
/// k-part factorizations of N with parts > L, couplings are exact contact
/// elements on the grid. d = 0 comes back as a non-resonant system (N prime,
/// or k exceeding the prime factor count). Requires N > L^k.
RabiSystem build_rabi_system(const PotentialGrid& grid, std::uint64_t n_value, int k,
                             int scale, double gamma);

/// Assemble from externally supplied couplings (coupling models, synthetic tests).
RabiSystem assemble_rabi_system(std::uint64_t encoded, int bosons, SpectrumMode mode,
                                int scale, double omega_ext, double gamma,
                                std::vector<BosonicConfig> factor_states,
                                std::vector<double> couplings);

/// Closed-form amplitudes within the rotating-wave approximation:
/// b_0 = cos(Omega t), b_j = W_j / sqrt(sum W^2) sin(Omega t). Exactly unit norm.
struct RwaState {
  double ground = 1.0;
  std::vector<double> factors;
};
RwaState rwa_amplitudes(const RabiSystem& system, double t);

struct AmplitudeTrajectory {
  std::vector<double> times;
  std::vector<std::complex<double>> ground;
  std::vector<std::vector<std::complex<double>>> factors;  // [factor][sample], bosonic
  std::vector<double> norm;  // total probability inside the tracked basis
  std::size_t basis_size = 0;
  double max_norm_drift = 0.0;
  double max_edge_population = 0.0;  // probability on cutoff-touching states
  bool leakage_warning = false;

  void write_csv(std::ostream& out) const;
};

struct IntegrateOptions {
  double t_end = 0.0;     // 0 -> one Rabi period 2 pi / Omega
  int basis_cutoff = -1;  // -1 -> max factor-state level + 8
  int samples = 1200;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
};

/// Integrates the untruncated-drive coupled equations (no rotating-wave
/// averaging) on the bosonic basis of all non-decreasing k-tuples with
/// single-particle index <= cutoff. One representative ordinary amplitude is
/// evolved per multiset; bosonic amplitudes are formed only for output.
AmplitudeTrajectory integrate_full(const RabiSystem& system, const PotentialGrid& grid,
                                   const IntegrateOptions& options = {});

}  // namespace logfactor
