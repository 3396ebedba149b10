#include "logfactor/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace logfactor {

double cos_power_dc(int n) {
  if (n < 0 || n % 2 != 0) throw std::invalid_argument("cos_power_dc: n must be even and >= 0");
  // C(n, n/2) / 2^n via the log-gamma to stay finite for larger n.
  double log_c = std::lgamma(n + 1.0) - 2.0 * std::lgamma(n / 2 + 1.0);
  return std::exp(log_c - n * std::numbers::ln2);
}

double effective_frequency(int scale) {
  if (scale < 1) throw std::invalid_argument("effective_frequency: scale must be positive");
  return 1.0 / (scale - 0.5);
}

namespace {

double w_prefactor(int scale, int n) {
  const double pi = std::numbers::pi;
  return std::pow(2.0 / pi, n / 2.0) * std::pow(n / (pi * (2.0 * scale - 1.0)), (n - 2) / 4.0);
}

}  // namespace

double matrix_element_asymptotic(double n_value, int bosons, int scale) {
  if (bosons < 1) throw std::invalid_argument("matrix_element_asymptotic: bosons must be >= 1");
  const int n = bosons;
  const double log_ratio = std::log(n_value) - n * std::log(static_cast<double>(scale));
  if (!(log_ratio > 0.0))
    throw std::domain_error("matrix_element_asymptotic: requires N > L^n");
  const double common = std::pow(log_ratio, -n / 4.0) / std::sqrt(n_value);
  if (n % 2 == 0) return w_prefactor(scale, n) * cos_power_dc(n) * common;
  const double tunnel = std::pow(std::exp(log_ratio), -(2.0 * scale - 1.0) / (2.0 * n * n));
  return 2.0 * w_prefactor(scale, n) * cos_power_dc(n + 1) * common * tunnel;
}

double rabi_frequency_asymptotic(double gamma, double n_value, int bosons, int scale) {
  return 0.5 * gamma * matrix_element_asymptotic(n_value, bosons, scale);
}

ScalingFit scaling_exponent_check(int bosons, int scale, std::span<const std::uint64_t> primes) {
  if (primes.size() < 4)
    throw std::invalid_argument("scaling_exponent_check: need at least 4 primes");
  const int n = bosons;
  std::vector<double> x, y_corr, y_raw;
  for (std::uint64_t p : primes) {
    double n_value = std::pow(static_cast<double>(p), n);
    double w = matrix_element_asymptotic(n_value, n, scale);
    double log_ratio = std::log(n_value) - n * std::log(static_cast<double>(scale));
    x.push_back(std::log(n_value));
    y_raw.push_back(std::log(w));
    y_corr.push_back(std::log(w * std::pow(log_ratio, n / 4.0)));
  }
  auto fit = [&](const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      sxy += x[i] * y[i];
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double intercept = (sy - slope * sx) / m;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = y[i] - (slope * x[i] + intercept);
      rss += r * r;
    }
    return std::pair{slope, std::sqrt(rss / m)};
  };
  auto [slope_corr, rms_corr] = fit(y_corr);
  auto [slope_raw, rms_raw] = fit(y_raw);
  (void)slope_raw;
  return {slope_corr, rms_corr, rms_raw};
}

std::vector<FeasibilityPoint> feasibility_region(const FeasibilityOptions& options) {
  if (options.n_count < 2 || options.gamma_count < 2)
    throw std::invalid_argument("feasibility_region: need at least a 2x2 grid");
  const double omega0 = 2.0 * std::numbers::pi * options.nu0;  // rad/s
  std::vector<FeasibilityPoint> points;
  points.reserve(static_cast<std::size_t>(options.n_count) * options.gamma_count);
  for (int i = 0; i < options.n_count; ++i) {
    double tn = static_cast<double>(i) / (options.n_count - 1);
    double n_value = options.n_min * std::pow(options.n_max / options.n_min, tn);
    double w = 0.0;
    bool encodable = true;
    try {
      w = matrix_element_asymptotic(n_value, options.bosons, options.scale);
    } catch (const std::domain_error&) {
      encodable = false;  // N <= L^n: below the encodable range
    }
    for (int j = 0; j < options.gamma_count; ++j) {
      double tg = static_cast<double>(j) / (options.gamma_count - 1);
      double gamma = options.gamma_min * std::pow(options.gamma_max / options.gamma_min, tg);
      FeasibilityPoint pt;
      pt.n_value = n_value;
      pt.gamma = gamma;
      if (encodable) {
        pt.rabi = 0.5 * gamma * w;  // omega0 units
        pt.rwa_ok = pt.rabi <= 1.0 / n_value;
        pt.dec_ok = pt.rabi * omega0 * options.t_dec >= 5.0;
      }
      points.push_back(pt);
    }
  }
  return points;
}

double max_feasible_n(std::span<const FeasibilityPoint> points) {
  double best = 0.0;
  for (const auto& pt : points)
    if (pt.feasible() && pt.n_value > best) best = pt.n_value;
  return best;
}

std::pair<double, double> neighbor_detunings(std::uint64_t n_value) {
  if (n_value < 2) throw std::invalid_argument("neighbor_detunings: N must be >= 2");
  const double n = static_cast<double>(n_value);
  return {std::log1p(1.0 / n), -std::log1p(-1.0 / n)};
}

}  // namespace logfactor
