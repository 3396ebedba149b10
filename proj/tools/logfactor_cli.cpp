// Command-line front end: builds spectra-matched trap potentials, runs the
// factorization protocols, and emits the figure/table data files.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "logfactor/asymptotics.hpp"
#include "logfactor/bosonic.hpp"
#include "logfactor/degeneracy.hpp"
#include "logfactor/dynamics.hpp"
#include "logfactor/measurement.hpp"
#include "logfactor/potential.hpp"
#include "logfactor/primes.hpp"
#include "logfactor/protocol.hpp"
#include "logfactor/rng.hpp"
#include "logfactor/spectra.hpp"

using namespace logfactor;
using nlohmann::ordered_json;

namespace {

std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("LOGFACTOR_OUTDIR")) p = std::filesystem::path(dir) / p;
  }
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p;
}

std::ofstream open_out(const std::string& path) {
  auto resolved = resolve_out(path);
  std::ofstream out(resolved);
  if (!out) throw std::runtime_error("cannot write " + resolved.string());
  return out;
}

/// Builds a log-integer grid with enough levels, growing the box when the
/// boundary-decay check asks for more room.
PotentialGrid build_log_grid(int scale, int levels, double step) {
  GridSpec spec{25.0, step};
  for (int attempt = 0;; ++attempt) {
    try {
      BuildOptions opt;
      opt.grid = spec;
      return build_potential(Spectrum::log_integer(scale), levels, opt);
    } catch (const GridTooSmall& err) {
      if (attempt >= 4) throw;
      spec.extent = err.suggested_extent;
    }
  }
}

PotentialGrid build_prime_grid(int levels, double step) {
  GridSpec spec{48.0, step};
  for (int attempt = 0;; ++attempt) {
    try {
      BuildOptions opt;
      opt.grid = spec;
      return build_potential(Spectrum::prime(), levels, opt);
    } catch (const GridTooSmall& err) {
      if (attempt >= 4) throw;
      spec.extent = err.suggested_extent;
    }
  }
}

int max_level_needed_iterative(std::uint64_t n, int scale) {
  int top = 0;
  for (int k = 2;; ++k) {
    auto set = enumerate_factorizations(n, k, static_cast<std::uint64_t>(scale) + 1);
    if (set.count() == 0) break;
    for (const auto& tuple : set.solutions)
      top = std::max(top, static_cast<int>(tuple.back()) - scale);
  }
  return top;
}

// ---------------------------------------------------------------- build-potential

struct BuildPotentialArgs {
  std::string mode = "log";
  int scale = 3;
  int levels = 7;
  double extent = 0.0;  // 0 = auto
  double step = 0.01;
  double tolerance = 1e-3;
  int max_sweeps = 500;
  std::string out = "potential.csv";
  std::string eigen_out;
};

int run_build_potential(const BuildPotentialArgs& args) {
  BuildOptions opt;
  opt.grid.step = args.step;
  opt.grid.extent = args.extent;
  opt.tolerance = args.tolerance;
  opt.max_sweeps = args.max_sweeps;

  PotentialGrid grid = [&] {
    if (args.extent > 0.0) {
      auto spectrum = args.mode == "prime" ? Spectrum::prime() : Spectrum::log_integer(args.scale);
      return build_potential(spectrum, args.levels, opt);
    }
    return args.mode == "prime" ? build_prime_grid(args.levels, args.step)
                                : build_log_grid(args.scale, args.levels, args.step);
  }();

  ordered_json config{{"command", "build-potential"}, {"mode", args.mode},
                      {"L", args.scale},              {"levels", args.levels},
                      {"extent", grid.extent()},      {"step", args.step},
                      {"tolerance", args.tolerance},  {"max_sweeps", args.max_sweeps}};
  {
    auto out = open_out(args.out);
    out << "# " << config.dump() << "\n";
    grid.write_potential_csv(out);
  }
  if (!args.eigen_out.empty()) {
    auto out = open_out(args.eigen_out);
    out << "# " << config.dump() << "\n";
    grid.write_eigenfunctions_csv(out);
  }

  auto spectrum = args.mode == "prime" ? Spectrum::prime() : Spectrum::log_integer(args.scale);
  double worst = 0.0;
  for (int l = 0; l < grid.levels(); ++l)
    worst = std::max(worst, std::abs(grid.eigenvalues()[l] - spectrum.energy(l)));
  std::printf("converged in %d sweeps, max |E - target| = %.3g\n", grid.sweeps(), worst);
  for (int l = 0; l < grid.levels(); ++l)
    std::printf("  E_%-2d = %+.6f  (target %+.6f)\n", l, grid.eigenvalues()[l],
                spectrum.energy(l));
  std::printf("potential written to %s\n", resolve_out(args.out).c_str());
  return 0;
}

// ---------------------------------------------------------------- factor

struct FactorArgs {
  std::uint64_t n = 0;
  std::string mode = "iterative";
  int scale = 3;
  int bosons = 0;
  std::vector<int> multiplicities;
  std::uint64_t seed = 12345;
  int max_repeats = 40;
  double omega_window = 50.0;
  bool exact = false;
  bool full_dynamics = false;
  std::string out;
  std::string jsonl;
};

int run_factor(const FactorArgs& args) {
  ProtocolOptions opt;
  opt.max_repeats = args.max_repeats;
  opt.omega_window = args.omega_window;
  opt.full_dynamics = args.full_dynamics;

  std::optional<PotentialGrid> grid;
  if (args.exact || args.full_dynamics) {
    if (args.mode == "prime-spectrum") {
      auto factors = prime_factorization(2 * args.n);
      std::size_t top = PrimeTable::shared().index_of(factors.back().first).value();
      grid.emplace(build_prime_grid(static_cast<int>(top) + 1, 0.01));
    } else {
      int top = max_level_needed_iterative(args.n, args.scale);
      // the full-dynamics basis extends 8 levels past the highest factor state
      int levels = args.full_dynamics ? top + 9 : std::max(top + 1, 2);
      if (levels > 80)
        throw std::runtime_error("exact couplings need " + std::to_string(levels) +
                                 " trap levels; drop --exact for the coupling model");
      grid.emplace(build_log_grid(args.scale, levels, 0.01));
    }
    opt.grid = &*grid;
  }

  Rng rng(args.seed);
  ProtocolRun run = [&] {
    if (args.mode == "iterative") return run_iterative(args.n, args.scale, opt, rng);
    if (args.mode == "known-n") {
      std::optional<std::vector<int>> mult;
      if (!args.multiplicities.empty()) mult = args.multiplicities;
      return run_known_n(args.n, args.scale, args.bosons, mult, opt, rng);
    }
    if (args.mode == "prime-spectrum") return run_prime_spectrum(args.n, opt, rng);
    throw CLI::ValidationError("--mode must be iterative, known-n or prime-spectrum");
  }();

  ordered_json transcript;
  transcript["config"] = ordered_json{{"command", "factor"},
                                      {"N", args.n},
                                      {"mode", args.mode},
                                      {"L", args.scale},
                                      {"n", args.bosons},
                                      {"multiplicities", args.multiplicities},
                                      {"seed", args.seed},
                                      {"max_repeats", args.max_repeats},
                                      {"omega_window", args.omega_window},
                                      {"exact_couplings", args.exact},
                                      {"full_dynamics", args.full_dynamics}};
  transcript["run"] = run.to_json();

  std::string text = transcript.dump(2);
  if (!args.out.empty()) {
    auto out = open_out(args.out);
    out << text << "\n";
  }
  if (!args.jsonl.empty()) {
    auto out = open_out(args.jsonl);
    for (const auto& step : run.steps)
      for (const auto& attempt : step.attempts) {
        ordered_json record{{"seed", args.seed},
                            {"t_m", attempt.time},
                            {"outcome", attempt.factor_found ? "factor" : "ground"},
                            {"factors", attempt.factors}};
        out << record.dump() << "\n";
      }
  }
  std::printf("verdict: %s\n", to_string(run.verdict).c_str());
  if (!run.confirmed_factors.empty()) {
    std::printf("factors:");
    for (auto f : run.confirmed_factors) std::printf(" %llu", (unsigned long long)f);
    std::printf("\n");
  }
  if (args.out.empty())
    std::printf("%s\n", text.c_str());
  else
    std::printf("transcript written to %s\n", resolve_out(args.out).c_str());
  return run.verdict == Verdict::exhausted ? 1 : 0;
}

// ---------------------------------------------------------------- degeneracy

int run_degeneracy(std::uint64_t n, int parts, std::uint64_t min_part, const std::string& out) {
  auto set = enumerate_factorizations(n, parts, min_part);
  std::printf("N = %llu into %d parts >= %llu: d = %zu\n", (unsigned long long)n, parts,
              (unsigned long long)min_part, set.count());
  for (const auto& tuple : set.solutions) {
    std::printf(" ");
    for (auto q : tuple) std::printf(" %llu", (unsigned long long)q);
    std::printf("\n");
  }
  if (!out.empty()) {
    ordered_json j{{"config", {{"command", "degeneracy"}, {"N", n}, {"k", parts}, {"min_part", min_part}}},
                   {"d", set.count()},
                   {"solutions", set.solutions}};
    auto file = open_out(out);
    file << j.dump(2) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::uint64_t n = 35;
  int bosons = 2;
  int scale = 3;
  double gamma = 0.0;  // 0 = policy value
  double safety = 0.05;
  double periods = 1.0;
  int cutoff = -1;
  int samples = 1200;
  std::string out = "trajectory.csv";
};

int run_simulate(const SimulateArgs& args) {
  int top = 0;
  for (const auto& levels :
       decompose_energy(Spectrum::log_integer(args.scale), args.n, args.bosons))
    top = std::max(top, static_cast<int>(levels.back()));
  int needed = std::max(top + 9, 13);
  if (needed > 80)
    throw std::runtime_error("basis needs " + std::to_string(needed) + " levels; too large");
  auto grid = build_log_grid(args.scale, needed, 0.01);

  RabiSystem probe = build_rabi_system(grid, args.n, args.bosons, args.scale, 1.0);
  double gamma = args.gamma;
  if (gamma <= 0.0) {
    if (!probe.resonant())
      throw std::runtime_error("no resonance: pass --gamma explicitly to drive anyway");
    gamma = (args.safety / static_cast<double>(args.n)) / probe.rabi_frequency;
  }
  auto sys = build_rabi_system(grid, args.n, args.bosons, args.scale, gamma);

  IntegrateOptions iopt;
  iopt.basis_cutoff = args.cutoff;
  iopt.samples = args.samples;
  if (sys.resonant())
    iopt.t_end = args.periods * 2.0 * std::numbers::pi / sys.rabi_frequency;
  else
    iopt.t_end = args.periods * 2.0 * std::numbers::pi * static_cast<double>(args.n);
  auto traj = integrate_full(sys, grid, iopt);

  ordered_json config{{"command", "simulate"}, {"N", args.n},       {"k", args.bosons},
                      {"L", args.scale},       {"gamma", gamma},    {"periods", args.periods},
                      {"cutoff", args.cutoff}, {"samples", args.samples}};
  {
    auto out = open_out(args.out);
    out << "# " << config.dump() << "\n";
    traj.write_csv(out);
  }

  std::printf("d = %d, Omega = %.6g, gamma = %.6g, basis = %zu states\n", sys.degeneracy(),
              sys.rabi_frequency, gamma, traj.basis_size);
  std::printf("norm drift %.3g, edge population %.3g%s\n", traj.max_norm_drift,
              traj.max_edge_population, traj.leakage_warning ? "  [leakage warning]" : "");
  if (sys.resonant()) {
    double sup = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      double rwa = std::cos(sys.rabi_frequency * traj.times[i]);
      sup = std::max(sup, std::abs(std::norm(traj.ground[i]) - rwa * rwa));
    }
    std::printf("sup-norm deviation from the RWA ground population: %.4f\n", sup);
  }
  std::printf("trajectory written to %s\n", resolve_out(args.out).c_str());
  return 0;
}

// ---------------------------------------------------------------- pt-curve

int run_pt_curve(double max_omega_t, int points, const std::string& out_path) {
  ordered_json config{
      {"command", "pt-curve"}, {"max_omega_t", max_omega_t}, {"points", points}};
  auto out = open_out(out_path);
  out << "# " << config.dump() << "\n";
  out << "omega_t,p_factor\n";
  char buf[64];
  for (int i = 0; i <= points; ++i) {
    double x = max_omega_t * i / points;
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", x, average_probability(x));
    out << buf;
  }
  std::printf("curve with %d points written to %s\n", points + 1,
              resolve_out(out_path).c_str());
  return 0;
}

// ---------------------------------------------------------------- feasibility

int run_feasibility(const FeasibilityOptions& opt, const std::string& out_path) {
  auto region = feasibility_region(opt);
  ordered_json config{{"command", "feasibility"}, {"L", opt.scale},
                      {"n", opt.bosons},          {"t_dec", opt.t_dec},
                      {"nu0", opt.nu0},           {"n_grid", opt.n_count},
                      {"gamma_grid", opt.gamma_count}};
  auto out = open_out(out_path);
  out << "# " << config.dump() << "\n";
  out << "N,gamma,omega_rabi,rwa_ok,dec_ok,feasible\n";
  char buf[160];
  for (const auto& pt : region) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%d,%d,%d\n", pt.n_value, pt.gamma,
                  pt.rabi, pt.rwa_ok ? 1 : 0, pt.dec_ok ? 1 : 0, pt.feasible() ? 1 : 0);
    out << buf;
  }
  std::printf("max feasible N = %.4g\n", max_feasible_n(region));
  std::printf("region written to %s\n", resolve_out(out_path).c_str());
  return 0;
}

// ---------------------------------------------------------------- validate

int run_validate() {
  int failures = 0;
  auto report = [&](bool ok, const std::string& name) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name.c_str());
    if (!ok) ++failures;
  };

  auto grid = build_log_grid(3, 13, 0.01);
  auto spectrum = Spectrum::log_integer(3);

  double worst_e = 0.0;
  for (int l = 0; l < grid.levels(); ++l)
    worst_e = std::max(worst_e, std::abs(grid.eigenvalues()[l] - spectrum.energy(l)));
  report(worst_e < 1e-3, "spectrum residual < 1e-3 (log L=3, 13 levels)");

  double worst_dot = 0.0;
  for (int a = 0; a < grid.levels(); ++a)
    for (int b = a; b < grid.levels(); ++b) {
      double dot = 0.0;
      const auto& fa = grid.eigenfunction(a);
      const auto& fb = grid.eigenfunction(b);
      for (std::size_t i = 0; i < fa.size(); ++i) dot += fa[i] * fb[i];
      worst_dot = std::max(worst_dot, std::abs(dot * grid.step() - (a == b ? 1.0 : 0.0)));
    }
  report(worst_dot < 1e-8, "eigenfunction orthonormality < 1e-8");

  bool nodes_ok = true;
  for (int l = 0; l < grid.levels(); ++l)
    nodes_ok = nodes_ok && count_nodes(grid.eigenfunction(l)) == l;
  report(nodes_ok, "node theorem");

  report(contact_matrix_element(grid, BosonicConfig::ground(2), BosonicConfig({1, 2})) == 0.0,
         "parity selection rule (odd index sum vanishes)");
  double w35 = contact_matrix_element(grid, BosonicConfig::ground(2), BosonicConfig({2, 4}));
  report(std::abs(w35) > 1e-10, "admissible factor state couples (N=35)");

  RabiSystem probe = build_rabi_system(grid, 35, 2, 3, 1.0);
  auto sys = build_rabi_system(grid, 35, 2, 3, (0.05 / 35.0) / probe.rabi_frequency);
  IntegrateOptions iopt;
  iopt.t_end = 0.25 * 2.0 * std::numbers::pi / sys.rabi_frequency;
  iopt.samples = 200;
  auto traj = integrate_full(sys, grid, iopt);
  report(traj.max_norm_drift < 1e-6, "full-dynamics norm drift < 1e-6");
  double sup = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    double rwa = std::cos(sys.rabi_frequency * traj.times[i]);
    sup = std::max(sup, std::abs(std::norm(traj.ground[i]) - rwa * rwa));
  }
  report(sup < 5e-2, "RWA agreement over a quarter period < 5e-2");

  bool deg_ok = enumerate_factorizations(245, 2, 4).count() == 2 &&
                enumerate_factorizations(385, 3, 4).count() == 1 &&
                stirling_count(4, 2) == 7 && partition_count_diff(4, 2) == 2;
  report(deg_ok, "degeneracy counters");

  Rng rng(2718);
  auto factored = run_iterative(385, 3, {}, rng);
  report(factored.verdict == Verdict::factored &&
             factored.confirmed_factors == std::vector<std::uint64_t>{5, 7, 11},
         "iterative protocol on N=385");

  const int runs = 40000;
  int hits = 0;
  Rng mc(137);
  const double window = 50.0 / sys.rabi_frequency;
  for (int i = 0; i < runs; ++i)
    hits += measure_random_time(sys, window, mc).factor_found ? 1 : 0;
  double p_hat = static_cast<double>(hits) / runs;
  report(std::abs(p_hat - 0.5) < 0.02, "random-time factor probability near 1/2");

  std::printf(failures == 0 ? "all checks passed\n" : "%d check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trap-spectrum factorization simulator"};
  app.require_subcommand(1);

  BuildPotentialArgs bp;
  auto* cmd_bp = app.add_subcommand("build-potential",
                                    "construct a trap potential with a prescribed spectrum");
  cmd_bp->add_option("--mode", bp.mode, "log | prime")->check(CLI::IsMember({"log", "prime"}));
  cmd_bp->add_option("--L", bp.scale, "scale parameter (odd, >= 3)");
  cmd_bp->add_option("--levels", bp.levels, "number of levels to match");
  cmd_bp->add_option("--extent", bp.extent, "grid half-width (0 = auto)");
  cmd_bp->add_option("--step", bp.step, "grid step");
  cmd_bp->add_option("--tol", bp.tolerance, "convergence tolerance");
  cmd_bp->add_option("--max-sweeps", bp.max_sweeps, "sweep budget");
  cmd_bp->add_option("--out", bp.out, "potential CSV path");
  cmd_bp->add_option("--eigen-out", bp.eigen_out, "eigenfunction CSV path");

  FactorArgs fa;
  auto* cmd_fa = app.add_subcommand("factor", "run a factorization protocol");
  cmd_fa->add_option("--N", fa.n, "integer to factor")->required();
  cmd_fa->add_option("--mode", fa.mode, "iterative | known-n | prime-spectrum")
      ->check(CLI::IsMember({"iterative", "known-n", "prime-spectrum"}));
  cmd_fa->add_option("--L", fa.scale, "scale parameter");
  cmd_fa->add_option("--n", fa.bosons, "prime factor count (known-n mode)");
  cmd_fa->add_option("--multiplicities", fa.multiplicities,
                     "factor multiplicities (known-n mode)")
      ->delimiter(',');
  cmd_fa->add_option("--seed", fa.seed, "RNG seed");
  cmd_fa->add_option("--max-repeats", fa.max_repeats, "measurement repeats per step");
  cmd_fa->add_option("--omega-window", fa.omega_window, "measurement window as Omega*T");
  cmd_fa->add_flag("--exact", fa.exact, "exact couplings from a built grid");
  cmd_fa->add_flag("--full-dynamics", fa.full_dynamics,
                   "collapse measurements on the integrated dynamics (implies --exact)");
  cmd_fa->add_option("--out", fa.out, "JSON transcript path");
  cmd_fa->add_option("--jsonl", fa.jsonl, "per-measurement JSON-lines path");

  std::uint64_t deg_n = 0;
  int deg_k = 2;
  std::uint64_t deg_min = 2;
  std::string deg_out;
  auto* cmd_dg = app.add_subcommand("degeneracy", "enumerate k-part factorizations");
  cmd_dg->add_option("--N", deg_n, "integer")->required();
  cmd_dg->add_option("--k", deg_k, "number of parts");
  cmd_dg->add_option("--min-part", deg_min, "smallest admissible part");
  cmd_dg->add_option("--json", deg_out, "JSON output path");

  SimulateArgs sa;
  auto* cmd_sm = app.add_subcommand("simulate", "integrate the driven dynamics (full + RWA)");
  cmd_sm->add_option("--N", sa.n, "encoded integer")->required();
  cmd_sm->add_option("--k", sa.bosons, "boson count");
  cmd_sm->add_option("--L", sa.scale, "scale parameter");
  cmd_sm->add_option("--gamma", sa.gamma, "drive strength (0 = policy)");
  cmd_sm->add_option("--safety", sa.safety, "policy safety factor");
  cmd_sm->add_option("--periods", sa.periods, "Rabi periods to integrate");
  cmd_sm->add_option("--cutoff", sa.cutoff, "basis cutoff (-1 = auto)");
  cmd_sm->add_option("--samples", sa.samples, "output samples");
  cmd_sm->add_option("--out", sa.out, "trajectory CSV path");

  double pt_max = 20.0;
  int pt_points = 400;
  std::string pt_out = "pt.csv";
  auto* cmd_pt = app.add_subcommand("pt-curve", "average factor probability vs Omega*T");
  cmd_pt->add_option("--max-omega-t", pt_max, "curve endpoint");
  cmd_pt->add_option("--points", pt_points, "sample count");
  cmd_pt->add_option("--out", pt_out, "CSV path");

  FeasibilityOptions fo;
  std::string fe_out = "feasibility.csv";
  auto* cmd_fe = app.add_subcommand("feasibility", "map the (N, gamma) feasibility region");
  cmd_fe->add_option("--L", fo.scale, "scale parameter");
  cmd_fe->add_option("--n", fo.bosons, "boson count (N = p^n family)");
  cmd_fe->add_option("--tdec", fo.t_dec, "decoherence time, seconds");
  cmd_fe->add_option("--nu0", fo.nu0, "trap frequency omega0 / 2 pi, Hz");
  cmd_fe->add_option("--n-min", fo.n_min, "smallest N");
  cmd_fe->add_option("--n-max", fo.n_max, "largest N");
  cmd_fe->add_option("--n-count", fo.n_count, "N grid points");
  cmd_fe->add_option("--gamma-min", fo.gamma_min, "smallest gamma");
  cmd_fe->add_option("--gamma-max", fo.gamma_max, "largest gamma");
  cmd_fe->add_option("--gamma-count", fo.gamma_count, "gamma grid points");
  cmd_fe->add_option("--out", fe_out, "CSV path");

  auto* cmd_va = app.add_subcommand("validate", "run the invariant suite and report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints usage or help text
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_bp->parsed()) return run_build_potential(bp);
    if (cmd_fa->parsed()) return run_factor(fa);
    if (cmd_dg->parsed()) return run_degeneracy(deg_n, deg_k, deg_min, deg_out);
    if (cmd_sm->parsed()) return run_simulate(sa);
    if (cmd_pt->parsed()) return run_pt_curve(pt_max, pt_points, pt_out);
    if (cmd_fe->parsed()) return run_feasibility(fo, fe_out);
    if (cmd_va->parsed()) return run_validate();
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
