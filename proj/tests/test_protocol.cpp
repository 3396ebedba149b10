#include "logfactor/protocol.hpp"

#include <cmath>

#include "doctest.h"
#include "logfactor/degeneracy.hpp"
#include "logfactor/potential.hpp"
#include "support/fixtures.hpp"

using namespace logfactor;

TEST_CASE("iterative run factors 35") {
  ProtocolOptions opt;
  Rng rng(11);
  auto run = run_iterative(35, 3, opt, rng);
  CHECK(run.verdict == Verdict::factored);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{5, 7});
  CHECK(run.factors_verified_prime);
  // k=2 succeeds, k=3 probes empty: n steps total for n = 2 factors
  CHECK(run.steps.size() == 2);
  CHECK(run.successful_steps() == 1);
  CHECK(run.probe_steps() == 1);
}

TEST_CASE("iterative run with exact couplings on the grid") {
  ProtocolOptions opt;
  opt.grid = &fixtures::log3_13();
  Rng rng(12);
  auto run = run_iterative(35, 3, opt, rng);
  CHECK(run.verdict == Verdict::factored);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{5, 7});
  // gamma policy keeps the RWA bound
  CHECK(run.steps[0].rabi_frequency <= 1.0 / 35.0 + 1e-12);
}

TEST_CASE("iterative run declares 37 prime") {
  ProtocolOptions opt;
  Rng rng(3);
  auto run = run_iterative(37, 3, opt, rng);
  CHECK(run.verdict == Verdict::prime);
  CHECK(run.steps.size() == 1);
  CHECK(run.successful_steps() == 0);
}

TEST_CASE("iterative run on 385 walks through a splitting then the triple") {
  ProtocolOptions opt;
  Rng rng(2024);
  auto run = run_iterative(385, 3, opt, rng);
  CHECK(run.verdict == Verdict::factored);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{5, 7, 11});
  REQUIRE(run.steps.size() == 3);  // k = 2, 3 succeed; k = 4 probes empty
  // step k=2 must have yielded one of the S(3,2)=3 two-part splittings
  const auto& split = run.steps[0].measured_factors;
  bool known = split == std::vector<std::uint64_t>{5, 77} ||
               split == std::vector<std::uint64_t>{7, 55} ||
               split == std::vector<std::uint64_t>{11, 35};
  CHECK(known);
  CHECK(run.steps[0].degeneracy == 3);
  CHECK(run.steps[1].degeneracy == 1);
}

TEST_CASE("small factors are rejected upfront") {
  ProtocolOptions opt;
  Rng rng(1);
  CHECK_THROWS_AS(run_iterative(30, 3, opt, rng), std::invalid_argument);
  CHECK_THROWS_AS(run_iterative(33, 3, opt, rng), std::invalid_argument);
}

TEST_CASE("known-n with multiplicities factors 125 in one shot") {
  ProtocolOptions opt;
  Rng rng(8);
  auto run = run_known_n(125, 3, 3, std::vector<int>{3}, opt, rng);
  CHECK(run.verdict == Verdict::factored);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{5, 5, 5});
  REQUIRE(run.steps.size() == 1);
  CHECK(run.steps[0].attempts.size() == 1);
  CHECK(run.steps[0].attempts[0].factor_found);
}

TEST_CASE("known-n with exact couplings and multiplicities") {
  ProtocolOptions opt;
  opt.grid = &fixtures::log3_13();
  Rng rng(9);
  auto run = run_known_n(125, 3, 3, std::vector<int>{3}, opt, rng);
  CHECK(run.verdict == Verdict::factored);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{5, 5, 5});
}

TEST_CASE("known-n without multiplicities succeeds probabilistically") {
  ProtocolOptions opt;
  Rng rng(15);
  auto run = run_known_n(35, 3, 2, std::nullopt, opt, rng);
  CHECK(run.verdict == Verdict::factored);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{5, 7});
  CHECK(run.steps[0].attempts.size() >= 1);
}

TEST_CASE("known-n with a wrong n reports no resonance") {
  ProtocolOptions opt;
  Rng rng(4);
  auto run = run_known_n(35, 3, 3, std::nullopt, opt, rng);
  CHECK(run.verdict == Verdict::no_resonance);
  auto run2 = run_known_n(35, 3, 4, std::nullopt, opt, rng);
  CHECK(run2.verdict == Verdict::no_resonance);
}

TEST_CASE("known-n multiplicity sum is validated") {
  ProtocolOptions opt;
  Rng rng(4);
  CHECK_THROWS_AS(run_known_n(125, 3, 3, std::vector<int>{2}, opt, rng),
                  std::invalid_argument);
}

TEST_CASE("prime-spectrum run on 35") {
  ProtocolOptions opt;
  Rng rng(21);
  auto run = run_prime_spectrum(35, opt, rng);
  CHECK(run.bosons == 6);  // floor(log2 35) + 1
  CHECK(run.parity_check_passed);
  CHECK(run.verdict == Verdict::factored);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{5, 7});
  // 35 = 5*7 has odd index sum (3+4), so the doubled tone is the driven one
  CHECK(run.steps[0].encoded == 70);
}

TEST_CASE("prime-spectrum run on 8") {
  ProtocolOptions opt;
  Rng rng(31);
  auto run = run_prime_spectrum(8, opt, rng);
  CHECK(run.bosons == 4);
  CHECK(run.verdict == Verdict::factored);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{2, 2, 2});
  CHECK(run.steps[0].encoded == 16);  // {1,1,1} is odd, {1,1,1,1} is even
}

TEST_CASE("prime-spectrum run with exact couplings") {
  ProtocolOptions opt;
  opt.grid = &fixtures::prime_14();
  Rng rng(23);
  auto run = run_prime_spectrum(35, opt, rng);
  CHECK(run.verdict == Verdict::factored);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{5, 7});
}

TEST_CASE("prime-spectrum identifies primes") {
  ProtocolOptions opt;
  Rng rng(41);
  auto run = run_prime_spectrum(13, opt, rng);
  CHECK(run.verdict == Verdict::prime);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{13});
}

TEST_CASE("prime-spectrum parity claim holds for all N <= 10000") {
  auto spectrum = Spectrum::prime();
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    int m = std::bit_width(n);
    auto dn = decompose_energy(spectrum, n, m);
    auto d2n = decompose_energy(spectrum, 2 * n, m);
    REQUIRE(dn.size() == 1);   // uniqueness up to padding
    REQUIRE(d2n.size() == 1);
    long long sum_n = 0, sum_2n = 0;
    for (auto l : dn[0]) sum_n += l;
    for (auto l : d2n[0]) sum_2n += l;
    CHECK((sum_n + sum_2n) % 2 == 1);  // exactly one even
  }
}

TEST_CASE("iterative sweep over composites up to 2000") {
  ProtocolOptions opt;
  Rng rng(777);
  for (std::uint64_t n = 5; n <= 2000; ++n) {
    if (n % 2 == 0 || n % 3 == 0) continue;
    Rng child = rng.derive(n);
    auto run = run_iterative(n, 3, opt, child);
    auto factors = prime_factorization(n);
    int omega = prime_factor_count(n);
    if (omega == 1) {
      CHECK(run.verdict == Verdict::prime);
    } else {
      REQUIRE(run.verdict == Verdict::factored);
      std::vector<std::uint64_t> expected;
      for (auto [p, e] : factors)
        for (int i = 0; i < e; ++i) expected.push_back(p);
      std::sort(expected.begin(), expected.end());
      CHECK(run.confirmed_factors == expected);
      CHECK(static_cast<int>(run.steps.size()) == omega);
    }
  }
}

TEST_CASE("full-dynamics measurements drive the protocol too") {
  ProtocolOptions opt;
  opt.grid = &fixtures::log3_13();
  opt.full_dynamics = true;
  opt.omega_window = 2.0;  // short window keeps each integration cheap
  Rng rng(64);
  auto run = run_iterative(35, 3, opt, rng);
  CHECK(run.verdict == Verdict::factored);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{5, 7});

  ProtocolOptions no_grid;
  no_grid.full_dynamics = true;
  Rng rng2(65);
  CHECK_THROWS_AS(run_iterative(35, 3, no_grid, rng2), std::invalid_argument);
  CHECK_THROWS_AS(run_prime_spectrum(35, no_grid, rng2), std::invalid_argument);
}

TEST_CASE("repeat exhaustion is reported with its residual risk") {
  ProtocolOptions opt;
  opt.omega_window = 1e-3;  // P(factor) ~ 3e-7 per attempt
  opt.max_repeats = 8;
  Rng rng(6);
  auto run = run_iterative(35, 3, opt, rng);
  CHECK(run.verdict == Verdict::exhausted);
  CHECK(run.steps.back().attempts.size() == 8);
  CHECK(run.residual_risk == doctest::Approx(std::pow(0.5, 8)));
  CHECK(run.confirmed_factors.empty());
}

TEST_CASE("known-n with n = 1 reads a prime directly") {
  ProtocolOptions opt;
  Rng rng(77);
  auto run = run_known_n(37, 3, 1, std::nullopt, opt, rng);
  CHECK(run.verdict == Verdict::factored);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{37});
  CHECK(run.factors_verified_prime);
}

TEST_CASE("prime-spectrum transcript records the parity check") {
  ProtocolOptions opt;
  Rng rng(91);
  auto run = run_prime_spectrum(77, opt, rng);
  auto j = run.to_json();
  CHECK(j["parity_check_passed"] == true);
  CHECK(run.confirmed_factors == std::vector<std::uint64_t>{7, 11});
}

TEST_CASE("transcripts are reproducible from the seed") {
  ProtocolOptions opt;
  Rng a(123), b(123);
  auto run_a = run_iterative(385, 3, opt, a);
  auto run_b = run_iterative(385, 3, opt, b);
  CHECK(run_a.to_json().dump(2) == run_b.to_json().dump(2));
  Rng c(124);
  auto run_c = run_iterative(385, 3, opt, c);
  CHECK(run_a.to_json() != run_c.to_json());  // different draw path
}

TEST_CASE("transcript carries the expected fields") {
  ProtocolOptions opt;
  Rng rng(55);
  auto run = run_iterative(35, 3, opt, rng);
  auto j = run.to_json();
  CHECK(j["mode"] == "iterative");
  CHECK(j["N"] == 35);
  CHECK(j["seed"] == 55);
  CHECK(j["verdict"] == "factored");
  CHECK(j["steps"].size() == 2);
  CHECK(j["steps"][0]["d"] == 1);
  CHECK(j["confirmed_factors"] == nlohmann::ordered_json::array({5, 7}));
}
