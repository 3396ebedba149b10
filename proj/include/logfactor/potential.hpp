#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "logfactor/spectra.hpp"

namespace logfactor {

/// Uniform symmetric grid for the dimensionless coordinate xi = alpha x.
struct GridSpec {
  double extent = 25.0;  // xi in [-extent, +extent]
  double step = 0.01;

  /// Symmetric about 0 with an odd point count (xi = 0 is a grid point).
  std::vector<double> points() const;
};

/// Eigenfunction of the requested top level does not decay below 1e-10 at the
/// grid edge; retry with at least suggested_extent.
class GridTooSmall : public std::runtime_error {
 public:
  GridTooSmall(double current, double suggested)
      : std::runtime_error("grid too small: extent " + std::to_string(current) +
                           " insufficient, suggest >= " + std::to_string(suggested)),
        suggested_extent(suggested) {}
  double suggested_extent;
};

class BuildFailure : public std::runtime_error {
 public:
  BuildFailure(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

struct EigenSolution {
  std::vector<double> values;                   // ascending, hw0 units
  std::vector<std::vector<double>> functions;   // quadrature-normalized, real
};

/// Lowest `levels` eigenpairs of -1/2 d^2/dxi^2 + v on the grid
/// (three-point finite differences, symmetric tridiagonal matrix).
/// Sign convention: phi_l(0+) > 0 for even l, phi_l'(0) > 0 for odd l.
EigenSolution solve_eigenproblem(const std::vector<double>& xi,
                                 const std::vector<double>& v, int levels);

/// Sampled potential with its computed eigenpairs. Immutable once built.
class PotentialGrid {
 public:
  PotentialGrid(std::vector<double> xi, std::vector<double> v, EigenSolution eigen,
                int sweeps = 0, std::vector<double> residual_history = {});

  const std::vector<double>& xi() const { return xi_; }
  const std::vector<double>& v() const { return v_; }
  const std::vector<double>& eigenvalues() const { return eigen_.values; }
  const std::vector<double>& eigenfunction(int level) const;
  int levels() const { return static_cast<int>(eigen_.values.size()); }
  std::size_t size() const { return xi_.size(); }
  double step() const { return xi_[1] - xi_[0]; }
  double extent() const { return xi_.back(); }

  /// Number of update sweeps the builder used (0 for directly solved grids).
  int sweeps() const { return sweeps_; }
  const std::vector<double>& residual_history() const { return residuals_; }

  void write_potential_csv(std::ostream& out) const;       // xi,v
  void write_eigenfunctions_csv(std::ostream& out) const;  // xi,phi0,phi1,...

 private:
  std::vector<double> xi_, v_;
  EigenSolution eigen_;
  int sweeps_;
  std::vector<double> residuals_;
};

struct BuildOptions {
  GridSpec grid;
  double tolerance = 1e-3;  // max |E_l - target_l| after the final gauge shift
  int max_sweeps = 500;
  double damping = 0.5;     // initial step fraction eta
  double update_cap = 0.5;  // trust bound on |dV| per sweep, hw0

  /// Starting harmonic frequency; 0 picks the mode default
  /// (omega_eff = 1/(L - 1/2) for log spectra, ln 2 for the prime spectrum).
  double initial_omega = 0.0;
  std::vector<double> initial_potential;  // explicit start, overrides initial_omega
};

/// Iteratively reshapes a trap potential until its lowest eigenvalues match
/// the spectrum, then shifts the gauge so the ground energy is exact.
/// Throws BuildFailure (with the residual history) on non-convergence.
PotentialGrid build_potential(const Spectrum& target, int levels,
                              const BuildOptions& options = {});

/// Same solver for an arbitrary strictly increasing target sequence.
PotentialGrid build_potential(const std::vector<double>& targets,
                              const BuildOptions& options = {});

/// Sample an analytic potential on the grid and solve it.
PotentialGrid make_grid(const GridSpec& spec, const std::function<double(double)>& v,
                        int levels);

/// Interior sign changes, ignoring the near-zero tails.
int count_nodes(const std::vector<double>& f);

}  // namespace logfactor
