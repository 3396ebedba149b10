#include "logfactor/measurement.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "logfactor/potential.hpp"
#include "support/fixtures.hpp"

using namespace logfactor;

namespace {

RabiSystem synthetic(double w1, double w2) {
  return assemble_rabi_system(245, 2, SpectrumMode::log_integer, 3, 1.0, 0.2,
                              {BosonicConfig({2, 46}), BosonicConfig({4, 32})}, {w1, w2});
}

}  // namespace

TEST_CASE("average probability values") {
  CHECK(average_probability(0.0) == 0.0);
  CHECK(average_probability(std::numbers::pi / 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(average_probability(std::numbers::pi) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(average_probability(std::numbers::pi / 4) ==
        doctest::Approx(0.18169011381620933).epsilon(1e-14));  // 1/2 - 1/pi
  CHECK(average_probability(0.1) == doctest::Approx(0.0033266730123469614).epsilon(1e-12));
  // small-window expansion (Omega T)^2 / 3
  CHECK(average_probability(0.1) == doctest::Approx(0.01 / 3.0).epsilon(2e-3));
  CHECK(average_probability(1e4) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("average probability equals the quadrature of sin^2") {
  for (double x : {0.4, 1.7, 6.0, 19.5}) {
    // Simpson quadrature of (1/T) int sin^2(t') dt' on [0, x]
    const int steps = 4000;
    double sum = 0.0;
    for (int i = 0; i <= steps; ++i) {
      double t = x * i / steps;
      double f = std::sin(t) * std::sin(t);
      sum += (i == 0 || i == steps) ? f : (i % 2 ? 4.0 * f : 2.0 * f);
    }
    double quad = sum * (x / steps) / 3.0 / x;
    CHECK(average_probability(x) == doctest::Approx(quad).epsilon(1e-9));
  }
}

TEST_CASE("monte-carlo agreement at Omega T = 50") {
  auto sys = synthetic(0.07, 0.05);
  const double window = 50.0 / sys.rabi_frequency;
  Rng rng(20240917);
  const int runs = 100000;
  int hits = 0;
  for (int i = 0; i < runs; ++i)
    hits += measure_random_time(sys, window, rng).factor_found ? 1 : 0;
  double p_hat = static_cast<double>(hits) / runs;
  double p = average_probability(50.0);
  double sigma = std::sqrt(p * (1 - p) / runs);
  CHECK(std::abs(p_hat - p) < 3 * sigma);
}

TEST_CASE("conditional branch frequencies follow the coupling weights") {
  auto sys = synthetic(0.09, 0.02);
  double sum_sq = 0.09 * 0.09 + 0.02 * 0.02;
  Rng rng(99);
  const double window = 50.0 / sys.rabi_frequency;
  int first = 0, total = 0;
  for (int i = 0; i < 60000; ++i) {
    auto outcome = measure_random_time(sys, window, rng);
    if (!outcome.factor_found) continue;
    ++total;
    if (outcome.state == sys.factor_states[0]) ++first;
  }
  double expected = 0.09 * 0.09 / sum_sq;
  double p_hat = static_cast<double>(first) / total;
  double sigma = std::sqrt(expected * (1 - expected) / total);
  CHECK(std::abs(p_hat - expected) < 4 * sigma);
}

TEST_CASE("decoded factors multiply to N") {
  auto sys = synthetic(0.07, 0.05);
  Rng rng(5);
  const double window = 50.0 / sys.rabi_frequency;
  for (int i = 0; i < 500; ++i) {
    auto outcome = measure_random_time(sys, window, rng);
    if (!outcome.factor_found) continue;
    std::uint64_t product = 1;
    for (auto f : outcome.factors) product *= f;
    CHECK(product == 245);
  }
}

TEST_CASE("pi-half measurement on the exact N=35 system") {
  const auto& grid = fixtures::log3_13();
  RabiSystem probe = build_rabi_system(grid, 35, 2, 3, 1.0);
  auto sys = build_rabi_system(grid, 35, 2, 3, (0.05 / 35.0) / probe.rabi_frequency);

  auto outcome = measure_at_pi_half(sys);
  CHECK(outcome.factor_found);
  CHECK(outcome.factors == std::vector<std::uint64_t>{5, 7});

  // a full period later the ground state returns with certainty
  Rng rng(1);
  double t_full = std::numbers::pi / sys.rabi_frequency;
  auto back = measure_at(sys, t_full, rng);
  CHECK(!back.factor_found);

  // d > 1 refuses
  auto deg = synthetic(0.07, 0.05);
  CHECK_THROWS_AS(measure_at_pi_half(deg), std::invalid_argument);
}

TEST_CASE("pi-half outcome survives the full dynamics check") {
  const auto& grid = fixtures::log3_13();
  RabiSystem probe = build_rabi_system(grid, 35, 2, 3, 1.0);
  auto sys = build_rabi_system(grid, 35, 2, 3, (0.05 / 35.0) / probe.rabi_frequency);
  double t_n = 0.5 * std::numbers::pi / sys.rabi_frequency;
  IntegrateOptions opt;
  opt.t_end = t_n;
  opt.samples = 400;
  auto traj = integrate_full(sys, grid, opt);
  double p_factor = std::norm(traj.factors[0].back());
  CHECK(p_factor >= 0.95);
}

TEST_CASE("shor comparison values") {
  CHECK(shor_success_probability(1) == 0.0);
  CHECK(shor_success_probability(2) == doctest::Approx(0.5));
  CHECK(shor_success_probability(4) == doctest::Approx(7.0 / 8.0));
}

TEST_CASE("json line record") {
  auto sys = synthetic(0.07, 0.05);
  Rng rng(17);
  auto outcome = measure_at(sys, 1.0, rng);
  auto line = to_json_line(outcome, 17);
  CHECK(line.find("\"seed\":17") != std::string::npos);
  CHECK(line.find("\"t_m\":1.0") != std::string::npos);
  CHECK(line.find("\"outcome\":") != std::string::npos);
  CHECK(line.find("\"factors\":") != std::string::npos);
}
