#pragma once

#include "logfactor/potential.hpp"
#include "logfactor/spectra.hpp"

// Shared grids, each built once per test binary.
namespace fixtures {

inline const logfactor::PotentialGrid& log3_13() {
  static const logfactor::PotentialGrid grid = [] {
    logfactor::BuildOptions opt;
    opt.grid = {40.0, 0.01};
    return logfactor::build_potential(logfactor::Spectrum::log_integer(3), 13, opt);
  }();
  return grid;
}

// Wide enough for the factor states of N = 245 (levels up to 46).
inline const logfactor::PotentialGrid& log3_47() {
  static const logfactor::PotentialGrid grid = [] {
    logfactor::BuildOptions opt;
    opt.grid = {95.0, 0.02};
    return logfactor::build_potential(logfactor::Spectrum::log_integer(3), 47, opt);
  }();
  return grid;
}

inline const logfactor::PotentialGrid& prime_14() {
  static const logfactor::PotentialGrid grid = [] {
    logfactor::BuildOptions opt;
    opt.grid = {48.0, 0.01};
    return logfactor::build_potential(logfactor::Spectrum::prime(), 14, opt);
  }();
  return grid;
}

}  // namespace fixtures
