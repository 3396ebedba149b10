#include "logfactor/bosonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "logfactor/potential.hpp"

namespace logfactor {

BosonicConfig::BosonicConfig(std::vector<int> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("BosonicConfig: needs at least one boson");
  for (int l : levels_)
    if (l < 0) throw std::invalid_argument("BosonicConfig: negative quantum number");
  std::sort(levels_.begin(), levels_.end());
}

BosonicConfig BosonicConfig::ground(int bosons) {
  return BosonicConfig(std::vector<int>(static_cast<std::size_t>(bosons), 0));
}

long long BosonicConfig::level_sum() const {
  long long sum = 0;
  for (int l : levels_) sum += l;
  return sum;
}

std::vector<int> BosonicConfig::multiplicities() const {
  std::vector<int> nu;
  for (std::size_t i = 0; i < levels_.size();) {
    std::size_t j = i;
    while (j < levels_.size() && levels_[j] == levels_[i]) ++j;
    nu.push_back(static_cast<int>(j - i));
    i = j;
  }
  return nu;
}

double BosonicConfig::normalization() const {
  auto nu = multiplicities();
  return normalization_factor(nu);
}

double BosonicConfig::permutation_count() const {
  // n! / prod nu_i!, assembled as a product of binomials to stay integral.
  double count = 1.0;
  int remaining = size();
  for (int nu : multiplicities()) {
    for (int i = 0; i < nu; ++i) {
      count = count * remaining / (nu - i);
      --remaining;
    }
  }
  return std::round(count);
}

std::string BosonicConfig::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (i) out << ',';
    out << levels_[i];
  }
  out << ')';
  return out.str();
}

double normalization_factor(std::span<const int> multiplicities) {
  int n = 0;
  double log_num = 0.0;
  for (int nu : multiplicities) {
    if (nu < 1) throw std::invalid_argument("normalization_factor: multiplicities must be >= 1");
    n += nu;
    log_num += std::lgamma(nu + 1.0);
  }
  return std::exp(0.5 * (log_num - std::lgamma(n + 1.0)));
}

namespace {

// Composite Simpson over the (odd-sized) grid.
double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  double sum = f.front() + f.back();
  for (std::size_t i = 1; i + 1 < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f[i];
  return sum * h / 3.0;
}

}  // namespace

double overlap_integral(const PotentialGrid& grid, const BosonicConfig& bra,
                        const BosonicConfig& ket) {
  if (bra.size() != ket.size())
    throw std::invalid_argument("overlap_integral: bra and ket particle counts differ");
  const auto check = [&](const BosonicConfig& c) {
    for (int l : c.levels())
      if (l >= grid.levels())
        throw std::out_of_range("overlap_integral: level " + std::to_string(l) +
                                " not available on grid (" + std::to_string(grid.levels()) + ")");
  };
  check(bra);
  check(ket);

  // Multiply in canonical level order so W(bra,ket) == W(ket,bra) bit-exact.
  std::vector<int> all;
  all.reserve(static_cast<std::size_t>(bra.size() + ket.size()));
  all.insert(all.end(), bra.levels().begin(), bra.levels().end());
  all.insert(all.end(), ket.levels().begin(), ket.levels().end());
  std::sort(all.begin(), all.end());

  std::vector<double> integrand(grid.size(), 1.0);
  for (int l : all) {
    const auto& phi = grid.eigenfunction(l);
    for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] *= phi[i];
  }
  return simpson(integrand, grid.step());
}

double contact_matrix_element(const PotentialGrid& grid, const BosonicConfig& bra,
                              const BosonicConfig& ket) {
  // Odd total parity integrates to zero over the symmetric trap.
  if ((bra.level_sum() + ket.level_sum()) % 2 != 0) return 0.0;
  return overlap_integral(grid, bra, ket) / (bra.normalization() * ket.normalization());
}

double bosonic_amplitude(double ordinary_amplitude, const BosonicConfig& config) {
  return ordinary_amplitude / config.normalization();
}

}  // namespace logfactor
