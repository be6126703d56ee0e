#pragma once

// Data-parallel kernels. Each has a serial reference (`*_serial`) kept for
// testing and benchmarking; the default entry point runs under OpenMP when
// the library was built with it.

#include <span>
#include <vector>

#include "reebfol/profile.hpp"

namespace reebfol {

struct GridSample {
  double rho = 0.0;
  double value = 0.0;
};

/// D(rho_i) on an even grid of `points` radii covering (rho_min, rho_max]
/// (the axis itself excluded). Returns nonpositive samples, plus the global
/// minimum in `minimum`.
std::vector<GridSample> wronskian_grid_failures(const Profile& profile, int points,
                                                GridSample* minimum = nullptr);
std::vector<GridSample> wronskian_grid_failures_serial(const Profile& profile, int points,
                                                       GridSample* minimum = nullptr);

/// Evaluates D on the given radii.
std::vector<double> wronskian_at(const Profile& profile, std::span<const double> rhos);
std::vector<double> wronskian_at_serial(const Profile& profile, std::span<const double> rhos);

bool openmp_enabled();
int openmp_threads();

}  // namespace reebfol
