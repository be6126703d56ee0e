#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "reebfol/error.hpp"
#include "reebfol/families.hpp"
#include "reebfol/foliation.hpp"
#include "reebfol/profile_io.hpp"

using namespace reebfol;

namespace {

const std::string kData = REEBFOL_DATA_DIR;

Profile fixture(const std::string& name) { return load_profile(kData + "/" + name + ".json"); }

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Domain;
}

// Max |rho| and |a| difference at the sample times of `a` that `b` also has.
double max_difference(const CylinderLeaf& a, const CylinderLeaf& b, int* matched) {
  double worst = 0.0;
  *matched = 0;
  std::size_t j = 0;
  for (const auto& x : a.samples) {
    while (j < b.samples.size() && b.samples[j].s < x.s - 1e-12) ++j;
    if (j == b.samples.size() || std::abs(b.samples[j].s - x.s) > 1e-12) continue;
    ++*matched;
    worst = std::max({worst, std::abs(b.samples[j].rho - x.rho), std::abs(b.samples[j].a - x.a)});
  }
  return worst;
}

}  // namespace

TEST_CASE("regions of the standard form and the twists") {
  const auto std_regions = decompose_regions(standard_profile(), 1, 0);
  REQUIRE(std_regions.size() == 1);
  CHECK(std_regions[0].kind == RegionKind::Core);
  CHECK(std_regions[0].lo == 0.0);
  CHECK(std_regions[0].hi == 1.0);

  const Profile half = fixture("half_lutz");
  const auto tori = scan_tori(half, 1, 0, 1e-12, 1.0);
  const auto half_regions = decompose_regions(half, 1, 0);
  REQUIRE(half_regions.size() == tori.size() + 1);
  CHECK(half_regions[0].kind == RegionKind::Annulus);
  CHECK(half_regions[0].lo == tori.back().r);
  CHECK(half_regions[1].kind == RegionKind::Core);
  CHECK(half_regions[1].hi == tori.back().r);

  const Profile full = fixture("full_lutz");
  const auto full_regions = decompose_regions(full, 1, 0);
  // Oracle: interior roots of g' found by root isolation.
  const auto roots = positivity_failures(full, 1e-12, 0.5, [](const Segment& s) { return s.local(Channel::G, 1); });
  REQUIRE(roots.size() == 2);
  REQUIRE(full_regions.size() == 3);
  CHECK(full_regions[0].kind == RegionKind::Annulus);
  CHECK(full_regions[1].kind == RegionKind::Annulus);
  CHECK(full_regions[2].kind == RegionKind::Core);
  CHECK(full_regions[1].lo == doctest::Approx(std::min(roots[0], roots[1])).epsilon(1e-9));
  CHECK(full_regions[0].lo == doctest::Approx(std::max(roots[0], roots[1])).epsilon(1e-9));

  CHECK(code_of([] { decompose_regions(standard_profile(), 0, 1); }) == ErrorCode::ContinuumOfTori);
}

TEST_CASE("half Lutz foliation: planes in the core, cylinders in the annulus") {
  const Profile p = fixture("half_lutz");
  const FoliationReport rep = build_foliation(p, 1, 0);
  CHECK(rep.stability.stable);
  REQUIRE(rep.regions.size() == 2);
  for (std::size_t i = 0; i < rep.leaves.size(); ++i) {
    const CylinderLeaf& l = rep.leaves[i];
    CHECK(cr_residual(l, p) < 1e-8);
    if (rep.regions[rep.leaf_region[i]].kind == RegionKind::Core) {
      CHECK(l.plane);
      REQUIRE(l.index);
      CHECK(*l.index == 2);
    } else {
      CHECK_FALSE(l.plane);
      CHECK(l.p == rep.regions[0].p);
      CHECK(l.q == 0);
    }
  }
  CHECK(rep.open_leaves == kDefaultDensity);
  const DisjointnessReport dis = disjointness_check(rep, 500, 1);
  CHECK(dis.disjoint);
  CHECK(dis.pairs_checked == 500);
}

TEST_CASE("surgery foliation: core cylinders to the simple central orbit") {
  const Profile p = fixture("surgery_q1");
  const FoliationReport rep = build_foliation(p, 1, 1);
  CHECK(rep.stability.stable);
  int core = 0;
  for (std::size_t i = 0; i < rep.leaves.size(); ++i) {
    if (rep.regions[rep.leaf_region[i]].kind != RegionKind::Core) continue;
    ++core;
    const CylinderLeaf& l = rep.leaves[i];
    CHECK(l.minus.target == EndTarget::Central);
    CHECK(l.minus.cover == 1);
    REQUIRE(l.index);
    CHECK(*l.index == 2);
  }
  CHECK(core == kDefaultDensity);
}

TEST_CASE("standard form: degenerate core") {
  const FoliationReport rep = build_foliation(standard_profile(), 1, 0, 4);
  CHECK_FALSE(rep.stability.stable);
  CHECK(std::none_of(rep.regions.begin(), rep.regions.end(),
                     [](const Region& r) { return r.kind == RegionKind::Annulus; }));
  REQUIRE_FALSE(rep.census.central.empty());
  CHECK(rep.census.central.front().degenerate);
  bool mentions = false;
  for (const auto& r : rep.stability.reasons) mentions |= r.find("degenerate") != std::string::npos;
  CHECK(mentions);
}

TEST_CASE("parallel and serial foliations agree bitwise") {
  const Profile p = fixture("full_lutz");
  const FoliationReport a = build_foliation(p, 1, 0, 6);
  const FoliationReport b = build_foliation_serial(p, 1, 0, 6);
  REQUIRE(a.leaves.size() == b.leaves.size());
  for (std::size_t i = 0; i < a.leaves.size(); ++i) {
    REQUIRE(a.leaves[i].samples.size() == b.leaves[i].samples.size());
    for (std::size_t k = 0; k < a.leaves[i].samples.size(); ++k) {
      CHECK(a.leaves[i].samples[k].s == b.leaves[i].samples[k].s);
      CHECK(a.leaves[i].samples[k].rho == b.leaves[i].samples[k].rho);
      CHECK(a.leaves[i].samples[k].a == b.leaves[i].samples[k].a);
    }
  }
  CHECK(a.stability.stable == b.stability.stable);
  CHECK(a.stability.reasons == b.stability.reasons);
}

TEST_CASE("leaf separation") {
  const Profile p = fixture("half_lutz");
  const CylinderLeaf a = integrate_cylinder(p, 1, 0, 0.4);
  const CylinderLeaf b = integrate_cylinder(p, 1, 0, 0.6);
  CHECK(leaf_separation(a, b) > 1e-9);
  CHECK(leaf_separation(a, a) == 0.0);
  const CylinderLeaf c = integrate_cylinder(p, 1, 0, 0.4, 0.0, 0.25, 0.0);
  CHECK(leaf_separation(a, c) > 1e-3);
  const CylinderLeaf core = integrate_cylinder(p, 1, 0, 0.1);
  CHECK(leaf_separation(a, core) == HUGE_VAL);
}

TEST_CASE("disjointness sampling is reproducible") {
  const FoliationReport rep = build_foliation(fixture("half_lutz"), 1, 0, 4);
  const auto x = disjointness_check(rep, 100, 7), y = disjointness_check(rep, 100, 7);
  CHECK(x.min_separation == y.min_separation);
  CHECK(x.seed == 7);
}

TEST_CASE("continuation with an unchanged profile reproduces the leaf") {
  for (auto [name, p, q, rho] : {std::tuple{"half_lutz", 1, 0, 0.1}, std::tuple{"surgery_q1", 1, 1, 0.15},
                                 std::tuple{"half_lutz", 1, 0, 0.6}}) {
    CAPTURE(name);
    const Profile prof = fixture(name);
    const CylinderLeaf leaf = integrate_cylinder(prof, p, q, rho);
    ContinuationReport rep;
    const CylinderLeaf again = continue_leaf(prof, prof, leaf, 0.0, &rep);
    int matched = 0;
    CHECK(max_difference(leaf, again, &matched) < 1e-9);
    CHECK(matched == static_cast<int>(leaf.samples.size()));
    CHECK(rep.c1_distance == 0.0);
    CHECK(rep.max_deviation_above == 0.0);
    CHECK(rep.integrability_rho == 0.0);
    CHECK(again.minus.target == leaf.minus.target);
    CHECK(again.index == leaf.index);
  }
}

TEST_CASE("continuation into the stabilized chart") {
  const Profile old_profile = fixture("hopf_chart");
  const Profile new_profile = fixture("stabilized_chart");
  const CylinderLeaf leaf = integrate_cylinder(old_profile, -1, -1, 0.33);
  CHECK_FALSE(leaf.certifiable);
  ContinuationReport rep;
  const CylinderLeaf out = continue_leaf(old_profile, new_profile, leaf, 0.0, &rep);
  CHECK(out.minus.target == EndTarget::Central);
  CHECK(out.minus.resolved);
  CHECK(out.certifiable);
  CHECK(out.minus.sign != 0);
  CHECK_FALSE(central_cz(new_profile, 1).degenerate);
  CHECK(rep.c1_distance > 0.0);
  CHECK(rep.matching_lo >= 0.3);
  CHECK(rep.max_deviation_above == 0.0);
  CHECK(cr_residual(out, new_profile) < 1e-8);
  // The chart ends before any torus, so the plus end is open and carries no index.
  CHECK(out.plus.target == EndTarget::Open);
  CHECK_FALSE(out.index);
}

TEST_CASE("continuation across a newly introduced torus") {
  const Profile old_profile = standard_profile();
  const Profile new_profile = fixture("half_lutz");
  const CylinderLeaf leaf = integrate_cylinder(old_profile, 1, 0, 0.7);
  CHECK(leaf.minus.target == EndTarget::Removable);
  const CylinderLeaf out = continue_leaf(old_profile, new_profile, leaf, 0.0);
  const double r0 = scan_tori(new_profile, 1, 0, 1e-12, 1.0).back().r;
  CHECK(out.minus.target == EndTarget::Torus);
  CHECK(out.minus.r == r0);
  CHECK(out.minus.resolved);
  CHECK(std::abs(out.samples.front().rho - r0) < 1e-4);
}

TEST_CASE("continuation refuses profiles that disagree on the matched part") {
  const Profile old_profile = standard_profile();
  const Profile new_profile = fixture("half_lutz");
  const CylinderLeaf leaf = integrate_cylinder(old_profile, 1, 0, 0.3);
  CHECK(code_of([&] { continue_leaf(old_profile, new_profile, leaf, 0.0); }) == ErrorCode::Matching);
}
