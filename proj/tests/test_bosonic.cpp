#include "logfactor/bosonic.hpp"

#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "logfactor/potential.hpp"
#include "support/fixtures.hpp"

using namespace logfactor;

namespace {

// Overlap-integral oracle on an abstract orthonormal level basis: represent
// the symmetrized (unnormalized) state as a map from ordered tuples to
// coefficients and take the exact inner product.
double symmetrized_norm(const std::vector<int>& levels) {
  std::vector<int> perm = levels;
  std::sort(perm.begin(), perm.end());
  std::map<std::vector<int>, double> state;
  do {
    state[perm] += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  double norm_sq = 0.0;
  for (const auto& [tuple, coeff] : state) norm_sq += coeff * coeff;
  return std::sqrt(norm_sq);
}

}  // namespace

TEST_CASE("normalization factor against the permutation oracle") {
  // N({nu}) must be 1/norm of the bare symmetrized sum.
  CHECK(normalization_factor(std::vector<int>{2}) == doctest::Approx(1.0));
  CHECK(normalization_factor(std::vector<int>{1, 1}) ==
        doctest::Approx(1.0 / symmetrized_norm({0, 1})));
  CHECK(normalization_factor(std::vector<int>{1, 1, 1}) ==
        doctest::Approx(1.0 / symmetrized_norm({0, 1, 2})));
  CHECK(normalization_factor(std::vector<int>{1, 1}) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(normalization_factor(std::vector<int>{1, 1, 1}) ==
        doctest::Approx(1.0 / std::sqrt(6.0)));
  CHECK(normalization_factor(std::vector<int>{2, 1}) ==
        doctest::Approx(1.0 / symmetrized_norm({0, 0, 1})));
}

TEST_CASE("config bookkeeping") {
  BosonicConfig c(std::vector<int>{4, 0, 2, 0});
  CHECK(c.levels() == std::vector<int>{0, 0, 2, 4});
  CHECK(c.multiplicities() == std::vector<int>{2, 1, 1});
  CHECK(c.permutation_count() == doctest::Approx(12.0));
  CHECK(c.level_sum() == 6);
  CHECK(c.normalization() ==
        doctest::Approx(std::sqrt(2.0 / 24.0)));  // sqrt(2! 1! 1! / 4!)
  CHECK(BosonicConfig::ground(3).normalization() == doctest::Approx(1.0));
}

TEST_CASE("parity shortcut returns exact zero") {
  const auto& grid = fixtures::log3_13();
  BosonicConfig ground = BosonicConfig::ground(2);
  CHECK(contact_matrix_element(grid, ground, BosonicConfig({1, 2})) == 0.0);
  CHECK(contact_matrix_element(grid, ground, BosonicConfig({0, 1})) == 0.0);
  CHECK(contact_matrix_element(grid, BosonicConfig({1, 2}), BosonicConfig({0, 2})) == 0.0);
}

TEST_CASE("bra/ket symmetry and shuffle invariance") {
  const auto& grid = fixtures::log3_13();
  std::mt19937 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(gen() % 2);
    std::vector<int> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(static_cast<int>(gen() % 6));
      b.push_back(static_cast<int>(gen() % 6));
    }
    BosonicConfig bra(a), ket(b);
    double w1 = contact_matrix_element(grid, bra, ket);
    double w2 = contact_matrix_element(grid, ket, bra);
    CHECK(w1 == doctest::Approx(w2).epsilon(1e-14));
    // construction already sorts, so shuffled input builds the same state
    std::shuffle(a.begin(), a.end(), gen);
    CHECK(BosonicConfig(a) == bra);
  }
}

TEST_CASE("N=35 coupling is positive and stable under quadrature refinement") {
  const auto& grid = fixtures::log3_13();
  BosonicConfig ground = BosonicConfig::ground(2);
  BosonicConfig factor({2, 4});
  double simpson = contact_matrix_element(grid, ground, factor);
  CHECK(simpson > 0.0);

  // trapezoid oracle on the same sampled integrand
  const auto& f0 = grid.eigenfunction(0);
  const auto& f2 = grid.eigenfunction(2);
  const auto& f4 = grid.eigenfunction(4);
  double trapezoid = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    auto term = [&](std::size_t j) { return f0[j] * f0[j] * f2[j] * f4[j]; };
    trapezoid += 0.5 * (term(i) + term(i + 1)) * grid.step();
  }
  trapezoid /= factor.normalization();  // ground normalization is 1
  CHECK(simpson == doctest::Approx(trapezoid).epsilon(1e-8));
}

TEST_CASE("parity rule: admissible factor states couple to the ground state") {
  const auto& grid = fixtures::log3_13();
  // factor states of N = 35 (k=2) and N = 125 (k=3); all indices even
  for (const auto& levels :
       {std::vector<int>{2, 4}, std::vector<int>{2, 2, 2}, std::vector<int>{2, 8}}) {
    BosonicConfig state(levels);
    double w = contact_matrix_element(
        grid, BosonicConfig::ground(static_cast<int>(levels.size())), state);
    CHECK(std::abs(w) > 1e-10);
  }
}

TEST_CASE("bosonic amplitude conversion") {
  CHECK(bosonic_amplitude(0.3, BosonicConfig({0, 1})) ==
        doctest::Approx(0.3 * std::sqrt(2.0)));
  CHECK(bosonic_amplitude(0.77, BosonicConfig({5, 5, 5})) == doctest::Approx(0.77));
}

TEST_CASE("probability bookkeeping matches exhaustive enumeration") {
  // two bosons on two levels: ordinary amplitudes b for each ordered pair,
  // symmetric under exchange; total probability must match the bosonic sum.
  const double b00 = 0.3, b01 = 0.2, b11 = 0.1;  // b10 = b01
  double ordinary_total = b00 * b00 + 2 * b01 * b01 + b11 * b11;
  double bosonic_total = 0.0;
  for (const auto& [levels, b] :
       std::vector<std::pair<std::vector<int>, double>>{{{0, 0}, b00}, {{0, 1}, b01}, {{1, 1}, b11}}) {
    double bb = bosonic_amplitude(b, BosonicConfig(levels));
    bosonic_total += bb * bb;
  }
  CHECK(bosonic_total == doctest::Approx(ordinary_total).epsilon(1e-15));
}

TEST_CASE("bosonic sum completeness on a 2-boson 4-level toy space") {
  // sum over non-decreasing tuples weighted by permutation count
  // equals the full Cartesian double sum
  auto f = [](int a, int b) { return std::cos(0.7 * a) * std::sin(0.3 + 0.4 * b) + a * b; };
  double cartesian = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) cartesian += f(a, b) + f(b, a);
  double bosonic = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      bosonic += BosonicConfig({a, b}).permutation_count() * (f(a, b) + f(b, a));
  CHECK(bosonic == doctest::Approx(cartesian).epsilon(1e-14));
}

TEST_CASE("level beyond the grid is rejected") {
  const auto& grid = fixtures::log3_13();
  CHECK_THROWS_AS(
      contact_matrix_element(grid, BosonicConfig::ground(2), BosonicConfig({2, 40})),
      std::out_of_range);
}
