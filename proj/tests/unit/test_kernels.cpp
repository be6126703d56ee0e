#include <doctest.h>

#include <vector>

#include "reebfol/families.hpp"
#include "reebfol/kernels.hpp"
#include "reebfol/profile_io.hpp"

using namespace reebfol;

TEST_CASE("parallel Wronskian grid equals the serial twin") {
  const Profile p = load_profile(std::string(REEBFOL_DATA_DIR) + "/full_lutz.json");
  for (int n : {1, 7, 10000, 100000}) {
    GridSample ma, mb;
    const auto a = wronskian_grid_failures(p, n, &ma);
    const auto b = wronskian_grid_failures_serial(p, n, &mb);
    CHECK(a.size() == b.size());
    CHECK(ma.rho == mb.rho);
    CHECK(ma.value == mb.value);
  }
  const auto bad = wronskian_grid_failures(mirrored_standard_profile(), 1000);
  CHECK(bad.size() == 1000);
}

TEST_CASE("parallel Wronskian evaluation equals the serial twin") {
  const Profile p = load_profile(std::string(REEBFOL_DATA_DIR) + "/surgery_q1.json");
  std::vector<double> rhos;
  for (int i = 0; i <= 5000; ++i) rhos.push_back(p.rho_max() * i / 5000.0);
  const auto a = wronskian_at(p, rhos), b = wronskian_at_serial(p, rhos);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  CHECK(a[1000] == doctest::Approx(wronskian(p, rhos[1000])).epsilon(1e-13));
}

TEST_CASE("thread count is reported") {
  CHECK(openmp_threads() >= 1);
  if (!openmp_enabled()) CHECK(openmp_threads() == 1);
}
