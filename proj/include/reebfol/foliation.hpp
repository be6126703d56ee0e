#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reebfol/cylinders.hpp"
#include "reebfol/orbits.hpp"
#include "reebfol/profile.hpp"

namespace reebfol {

enum class RegionKind { Annulus, Core };

std::string to_string(RegionKind kind);

struct Region {
  RegionKind kind = RegionKind::Core;
  double lo = 0.0, hi = 0.0;  // lo = 0 for the core
  int p = 0, q = 0;           // signed on this region
  std::vector<OrbitTorus> boundary_tori;
};

/// Regions from rho_max inward: annuli between consecutive roots of
/// q f' - 2 pi p g', then the core (or, for a profile that stops short of the
/// axis, the innermost annulus). Throws Error(ContinuumOfTori).
std::vector<Region> decompose_regions(const Profile& profile, int p, int q);

struct Stability {
  bool stable = false;
  std::vector<std::string> reasons;
};

struct OrbitCensus {
  std::vector<OrbitTorus> tori;
  std::vector<CentralOrbit> central;  // k = 1 and k = |q| when the core is used
};

struct FoliationReport {
  int p = 0, q = 0;
  int density = 0;
  std::vector<Region> regions;
  std::vector<CylinderLeaf> leaves;
  std::vector<int> leaf_region;  // region index of each leaf
  Stability stability;
  OrbitCensus census;
  int open_leaves = 0;  // leaves leaving through a profile end: index not assigned
};

inline constexpr int kDefaultDensity = 8;

/// `density` leaves per region at evenly spaced interior starting radii,
/// integrated in parallel, then a stability verdict.
FoliationReport build_foliation(const Profile& profile, int p, int q, int density = kDefaultDensity,
                                const IntegrationOptions& opts = {});
FoliationReport build_foliation_serial(const Profile& profile, int p, int q,
                                       int density = kDefaultDensity,
                                       const IntegrationOptions& opts = {});

/// The verdict from the census and leaves alone.
Stability assess_stability(const FoliationReport& report);

struct DisjointnessReport {
  bool disjoint = true;
  int pairs_checked = 0;
  double min_separation = 0.0;
  std::uint64_t seed = 0;
};

/// Samples random pairs of distinct leaves within a region and checks that
/// their images in M do not meet (within 1e-9).
DisjointnessReport disjointness_check(const FoliationReport& report, int samples,
                                      std::uint64_t seed = 0);

/// Minimum over the common s range of |rho_1(s) - rho_2(s)| divided by the
/// distance from rho_1(s) to the nearest limiting orbit (capped at 1), or
/// the angle fiber separation when the leaves lie on different fibers.
double leaf_separation(const CylinderLeaf& a, const CylinderLeaf& b);

struct ContinuationReport {
  double c1_distance = 0.0;      // sup over the common domain of the 0th and 1st derivatives
  double matching_lo = 0.0, matching_hi = 0.0;
  double integrability_rho = 0.0;  // theta_s phi_t - theta_t phi_s under the ansatz
  double integrability_a = 0.0;
  double max_deviation_above = 0.0;  // against the input for s >= s_match
};

/// Continues `leaf` (built on `old_profile`) to `new_profile` from its state
/// at s_match. The profiles must agree on the radii the leaf covers for
/// s >= s_match, else Error(Matching).
CylinderLeaf continue_leaf(const Profile& old_profile, const Profile& new_profile,
                           const CylinderLeaf& leaf, double s_match,
                           ContinuationReport* report = nullptr,
                           const IntegrationOptions& opts = {});

}  // namespace reebfol
