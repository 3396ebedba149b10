#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace logfactor {

/// Leading Fourier coefficient of cos^n: d0(n) = C(n, n/2) / 2^n (n even).
double cos_power_dc(int n);

/// Effective harmonic frequency of the trap bottom, omega_eff/omega0 = 1/(L - 1/2).
double effective_frequency(int scale);

/// Large-N closed form of the ground -> (p-L,...,p-L) contact element for
/// N = p^n. Even n:  w(L,n) d0(n) [ln(N/L^n)]^(-n/4) N^(-1/2);
/// odd n adds the factor 2 d0(n+1)/d0(n) (N/L^n)^(-(2L-1)/(2n^2)).
/// Throws std::domain_error when N <= L^n.
double matrix_element_asymptotic(double n_value, int bosons, int scale);

/// Omega_n = gamma/2 * W in omega0 units (gamma in hw0 units).
double rabi_frequency_asymptotic(double gamma, double n_value, int bosons, int scale);

struct ScalingFit {
  double exponent;                  // slope of ln(W corrected) vs ln N
  double rms_residual;              // fit residual with the log correction removed
  double rms_residual_uncorrected;  // residual when fitting raw ln W
};

/// Log-log fit of the asymptotic coupling over N = p^n for the given primes,
/// with the [ln(N/L^n)]^(-n/4) correction divided out so the pure power law
/// remains: slope -1/2 for even n, -(1/2 + (2L-1)/(2n^2)) for odd n.
ScalingFit scaling_exponent_check(int bosons, int scale, std::span<const std::uint64_t> primes);

struct FeasibilityPoint {
  double n_value = 0;   // treated as continuous along the N = p^n family
  double gamma = 0;     // hw0 units
  double rabi = 0;      // Omega/omega0
  bool rwa_ok = false;  // Omega <= omega0/N
  bool dec_ok = false;  // Omega * T_dec >= 5

  bool feasible() const { return rwa_ok && dec_ok; }
};

struct FeasibilityOptions {
  int scale = 3;
  int bosons = 4;
  double t_dec = 2.0;    // seconds
  double nu0 = 5000.0;   // Hz, omega0 = 2 pi nu0
  double n_min = 100.0, n_max = 1e5;
  int n_count = 200;
  double gamma_min = 1e-2, gamma_max = 1e2;
  int gamma_count = 200;
};

/// Log-log grid of (N, gamma) points with both inequality flags.
std::vector<FeasibilityPoint> feasibility_region(const FeasibilityOptions& options = {});

/// Largest N carrying at least one feasible gamma; 0 when none.
double max_feasible_n(std::span<const FeasibilityPoint> points);

/// Detunings to the neighboring encodable integers,
/// { ln((N+1)/L^n) - ln(N/L^n), ln(N/L^n) - ln((N-1)/L^n) }; both are ~ 1/N.
std::pair<double, double> neighbor_detunings(std::uint64_t n_value);

}  // namespace logfactor
