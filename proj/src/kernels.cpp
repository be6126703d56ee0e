#include "reebfol/kernels.hpp"

#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace reebfol {

namespace {

double grid_radius(const Profile& profile, int i, int points) {
  const double a = profile.rho_min(), b = profile.rho_max();
  if (profile.reaches_axis()) return a + (b - a) * static_cast<double>(i + 1) / points;
  if (points == 1) return b;
  return a + (b - a) * static_cast<double>(i) / (points - 1);
}

double wronskian_fast(const Profile& profile, double rho) {
  const Jet j = profile.jet(rho);
  return j.f[0] * j.g[1] - j.f[1] * j.g[0];
}

std::vector<GridSample> collect(const Profile& profile, const std::vector<double>& values,
                                GridSample* minimum) {
  std::vector<GridSample> bad;
  GridSample lowest{0.0, std::numeric_limits<double>::infinity()};
  const int points = static_cast<int>(values.size());
  for (int i = 0; i < points; ++i) {
    const double r = grid_radius(profile, i, points);
    if (values[i] < lowest.value) lowest = {r, values[i]};
    if (!(values[i] > 0.0)) bad.push_back({r, values[i]});
  }
  if (minimum) *minimum = lowest;
  return bad;
}

}  // namespace

std::vector<GridSample> wronskian_grid_failures(const Profile& profile, int points,
                                                GridSample* minimum) {
  if (points < 1) points = 1;
  std::vector<double> values(static_cast<std::size_t>(points));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < points; ++i) values[i] = wronskian_fast(profile, grid_radius(profile, i, points));
  return collect(profile, values, minimum);
}

std::vector<GridSample> wronskian_grid_failures_serial(const Profile& profile, int points,
                                                       GridSample* minimum) {
  if (points < 1) points = 1;
  std::vector<double> values(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) values[i] = wronskian_fast(profile, grid_radius(profile, i, points));
  return collect(profile, values, minimum);
}

std::vector<double> wronskian_at(const Profile& profile, std::span<const double> rhos) {
  std::vector<double> out(rhos.size());
  const long n = static_cast<long>(rhos.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = wronskian_fast(profile, rhos[i]);
  return out;
}

std::vector<double> wronskian_at_serial(const Profile& profile, std::span<const double> rhos) {
  std::vector<double> out(rhos.size());
  for (std::size_t i = 0; i < rhos.size(); ++i) out[i] = wronskian_fast(profile, rhos[i]);
  return out;
}

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int openmp_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace reebfol
