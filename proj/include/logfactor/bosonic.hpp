#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace logfactor {

class PotentialGrid;

/// Multiset of single-particle quantum numbers of an n-boson state, stored
/// non-decreasing (the bosonic-sum convention).
class BosonicConfig {
 public:
  BosonicConfig() = default;
  explicit BosonicConfig(std::vector<int> levels);

  static BosonicConfig ground(int bosons);

  const std::vector<int>& levels() const { return levels_; }
  int size() const { return static_cast<int>(levels_.size()); }
  long long level_sum() const;
  bool is_even() const { return level_sum() % 2 == 0; }

  /// Group sizes of equal quantum numbers, in level order.
  std::vector<int> multiplicities() const;

  /// N({nu}) = sqrt(prod nu_i! / n!); the symmetrized state has n!/prod nu_i!
  /// distinct permutations, so this normalizes it to unit norm.
  double normalization() const;

  /// n! / prod nu_i!, the number of distinct permutations (= N^-2).
  double permutation_count() const;

  bool operator==(const BosonicConfig& other) const { return levels_ == other.levels_; }
  bool operator<(const BosonicConfig& other) const { return levels_ < other.levels_; }

  std::string to_string() const;  // "(0,2,4)"

 private:
  std::vector<int> levels_;
};

double normalization_factor(std::span<const int> multiplicities);

/// Plain product integral  int dxi  prod_i phi_bra_i(xi) * prod_j phi_ket_j(xi)
/// (the delta chain of the contact interaction collapses all coordinates).
/// Composite Simpson on the grid. Throws std::out_of_range when a level is
/// not available on the grid.
double overlap_integral(const PotentialGrid& grid, const BosonicConfig& bra,
                        const BosonicConfig& ket);

/// Bosonic contact matrix element N_bra^-1 N_ket^-1 * overlap_integral.
/// Returns exactly 0, without quadrature, when the total index sum of bra and
/// ket is odd (integrand parity).
double contact_matrix_element(const PotentialGrid& grid, const BosonicConfig& bra,
                              const BosonicConfig& ket);

/// b^B = N({nu})^-1 b; measurement probabilities are |b^B|^2.
double bosonic_amplitude(double ordinary_amplitude, const BosonicConfig& config);

}  // namespace logfactor
