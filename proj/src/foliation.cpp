#include "reebfol/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <sstream>

#include "reebfol/error.hpp"

namespace reebfol {

namespace {

constexpr double kCollisionTolerance = 1e-9;

std::string format_radius(double r) {
  std::ostringstream os;
  os.precision(10);
  os << r;
  return os.str();
}

struct LeafTask {
  int region = 0;
  double rho = 0.0;
};

std::vector<LeafTask> leaf_tasks(const std::vector<Region>& regions, int density) {
  std::vector<LeafTask> tasks;
  for (int i = 0; i < static_cast<int>(regions.size()); ++i) {
    const Region& r = regions[i];
    for (int j = 0; j < density; ++j)
      tasks.push_back({i, r.lo + (r.hi - r.lo) * (j + 1) / (density + 1)});
  }
  return tasks;
}

FoliationReport start_report(const Profile& profile, int p, int q, int density) {
  if (density < 1) throw Error(ErrorCode::Input, "density must be positive");
  FoliationReport rep;
  std::tie(rep.p, rep.q) = normalize_slope(p, q);
  rep.density = density;
  rep.regions = decompose_regions(profile, rep.p, rep.q);
  const double lo_scan = std::max(profile.rho_min(), 1e-12);
  rep.census.tori = scan_tori(profile, rep.p, rep.q, lo_scan, profile.rho_max());
  const bool has_core = std::any_of(rep.regions.begin(), rep.regions.end(),
                                    [](const Region& r) { return r.kind == RegionKind::Core; });
  if (has_core) {
    rep.census.central.push_back(central_cz(profile, 1));
    if (std::abs(rep.q) > 1) rep.census.central.push_back(central_cz(profile, std::abs(rep.q)));
  }
  return rep;
}

void finish_report(FoliationReport& rep, std::vector<CylinderLeaf> leaves,
                   const std::vector<LeafTask>& tasks) {
  rep.leaves = std::move(leaves);
  rep.leaf_region.clear();
  for (const auto& t : tasks) rep.leaf_region.push_back(t.region);
  rep.open_leaves = 0;
  for (const auto& l : rep.leaves)
    if (l.minus.target == EndTarget::Open || l.plus.target == EndTarget::Open) ++rep.open_leaves;
  rep.stability = assess_stability(rep);
}

}  // namespace

std::string to_string(RegionKind kind) { return kind == RegionKind::Core ? "core" : "annulus"; }

std::vector<Region> decompose_regions(const Profile& profile, int p, int q) {
  std::tie(p, q) = normalize_slope(p, q);
  const double lo_scan = std::max(profile.rho_min(), 1e-12);
  const auto tori = scan_tori(profile, p, q, lo_scan, profile.rho_max());
  std::vector<double> cuts{profile.rho_max()};
  std::vector<const OrbitTorus*> at_cut{nullptr};
  for (auto it = tori.rbegin(); it != tori.rend(); ++it) {
    if (cuts.back() - it->r <= 1e-12) {
      at_cut.back() = &*it;
      continue;
    }
    cuts.push_back(it->r);
    at_cut.push_back(&*it);
  }
  std::vector<Region> regions;
  auto push = [&](RegionKind kind, double lo, double hi, const OrbitTorus* t_lo,
                  const OrbitTorus* t_hi) {
    Region r;
    r.kind = kind;
    r.lo = lo;
    r.hi = hi;
    std::tie(r.p, r.q) = sign_convention(profile, lo, hi, p, q);
    if (t_hi) r.boundary_tori.push_back(*t_hi);
    if (t_lo) r.boundary_tori.push_back(*t_lo);
    regions.push_back(std::move(r));
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    push(RegionKind::Annulus, cuts[i + 1], cuts[i], at_cut[i + 1], at_cut[i]);
  const double inner = cuts.back();
  if (inner - profile.rho_min() > 1e-12)
    push(profile.reaches_axis() ? RegionKind::Core : RegionKind::Annulus, profile.rho_min(), inner,
         nullptr, at_cut.back());
  return regions;
}

FoliationReport build_foliation(const Profile& profile, int p, int q, int density,
                                const IntegrationOptions& opts) {
  FoliationReport rep = start_report(profile, p, q, density);
  const auto tasks = leaf_tasks(rep.regions, density);
  const int n = static_cast<int>(tasks.size());
  std::vector<CylinderLeaf> leaves(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      const Region& r = rep.regions[tasks[i].region];
      leaves[i] = integrate_cylinder(profile, r.p, r.q, tasks[i].rho, 0.0, 0.0, 0.0, opts);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  finish_report(rep, std::move(leaves), tasks);
  return rep;
}

FoliationReport build_foliation_serial(const Profile& profile, int p, int q, int density,
                                       const IntegrationOptions& opts) {
  FoliationReport rep = start_report(profile, p, q, density);
  const auto tasks = leaf_tasks(rep.regions, density);
  std::vector<CylinderLeaf> leaves;
  leaves.reserve(tasks.size());
  for (const auto& t : tasks) {
    const Region& r = rep.regions[t.region];
    leaves.push_back(integrate_cylinder(profile, r.p, r.q, t.rho, 0.0, 0.0, 0.0, opts));
  }
  finish_report(rep, std::move(leaves), tasks);
  return rep;
}

Stability assess_stability(const FoliationReport& report) {
  Stability st;
  for (const auto& t : report.census.tori)
    if (!t.morse_bott) st.reasons.push_back("torus at rho = " + format_radius(t.r) + " is not Morse-Bott");
  for (const auto& c : report.census.central) {
    if (c.degenerate)
      st.reasons.push_back("central orbit cover k = " + std::to_string(c.k) + " is degenerate (rotation " +
                           format_radius(c.rotation) + ")");
  }
  std::vector<std::optional<std::pair<int, int>>> region_signs(report.regions.size());
  for (std::size_t i = 0; i < report.leaves.size(); ++i) {
    const CylinderLeaf& l = report.leaves[i];
    const int region = report.leaf_region[i];
    const std::string tag = "leaf " + std::to_string(i) + ": ";
    if (!l.certifiable) {
      std::string why = l.warnings.empty() ? "not certifiable" : l.warnings.front();
      st.reasons.push_back(tag + why);
    }
    if (!l.minus.resolved || !l.plus.resolved) st.reasons.push_back(tag + "unresolved asymptote");
    if (l.index && *l.index != 2)
      st.reasons.push_back(tag + "Fredholm index " + std::to_string(*l.index) + " != 2");
    const Region& r = report.regions[region];
    if (l.p != r.p || l.q != r.q) st.reasons.push_back(tag + "signed type differs from its region");
    const std::pair<int, int> signs{l.minus.sign, l.plus.sign};
    auto& seen = region_signs[region];
    if (!seen) seen = signs;
    else if (*seen != signs) st.reasons.push_back(tag + "puncture signs differ within the region");
  }
  for (std::size_t i = 0; i < report.regions.size(); ++i) {
    const bool populated = std::find(report.leaf_region.begin(), report.leaf_region.end(),
                                     static_cast<int>(i)) != report.leaf_region.end();
    if (!populated) st.reasons.push_back("region " + std::to_string(i) + " has no leaf");
  }
  st.stable = st.reasons.empty();
  return st;
}

double leaf_separation(const CylinderLeaf& a, const CylinderLeaf& b) {
  // Angle fibers are circles of direction (q, -p) in (theta, phi / 2 pi).
  const double dtheta = b.theta0 - a.theta0;
  const double deta = (b.phi0 - a.phi0) / (2.0 * std::numbers::pi);
  const double cross = dtheta * (-a.p) - deta * a.q;
  const double frac = cross - std::floor(cross);
  const double norm = std::hypot(static_cast<double>(a.p), static_cast<double>(a.q));
  const double fiber = std::min(frac, 1.0 - frac) / norm;
  // Leaves of different signed type live on disjoint radius ranges.
  if (a.p != b.p || a.q != b.q) return HUGE_VAL;
  if (fiber > kCollisionTolerance) return fiber;

  const auto& sa = a.samples;
  const auto& sb = b.samples;
  if (sa.empty() || sb.empty()) return 0.0;
  const double lo = std::max(sa.front().s, sb.front().s);
  const double hi = std::min(sa.back().s, sb.back().s);
  // Leaves asymptotic to the same orbit approach each other; measure in
  // units of the distance to the nearest limiting orbit.
  auto scale = [&](double rho) {
    double d = 1.0;
    if (a.minus.target != EndTarget::Open) d = std::min(d, std::abs(rho - a.minus.r));
    if (a.plus.target != EndTarget::Open) d = std::min(d, std::abs(a.plus.r - rho));
    return d;
  };
  double best = HUGE_VAL;
  std::size_t j = 0;
  for (const auto& x : sa) {
    if (x.s < lo || x.s > hi) continue;
    while (j + 1 < sb.size() && sb[j + 1].s < x.s) ++j;
    const auto& l = sb[j];
    const auto& r = sb[std::min(j + 1, sb.size() - 1)];
    const double w = r.s > l.s ? (x.s - l.s) / (r.s - l.s) : 0.0;
    const double d = scale(x.rho);
    if (d > 0.0) best = std::min(best, std::abs(x.rho - (l.rho + w * (r.rho - l.rho))) / d);
  }
  return best;
}

DisjointnessReport disjointness_check(const FoliationReport& report, int samples,
                                      std::uint64_t seed) {
  DisjointnessReport out;
  out.seed = seed;
  out.min_separation = HUGE_VAL;
  std::vector<std::vector<int>> members(report.regions.size());
  for (std::size_t i = 0; i < report.leaf_region.size(); ++i)
    members[report.leaf_region[i]].push_back(static_cast<int>(i));
  std::vector<int> eligible;
  for (std::size_t r = 0; r < members.size(); ++r)
    if (members[r].size() >= 2) eligible.push_back(static_cast<int>(r));
  if (eligible.empty()) return out;
  std::mt19937_64 rng(seed);
  for (int n = 0; n < samples; ++n) {
    const auto& m = members[eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)]];
    std::uniform_int_distribution<std::size_t> pick(0, m.size() - 1);
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    const double sep = leaf_separation(report.leaves[m[i]], report.leaves[m[j]]);
    out.min_separation = std::min(out.min_separation, sep);
    ++out.pairs_checked;
    if (!(sep > kCollisionTolerance)) out.disjoint = false;
  }
  return out;
}

CylinderLeaf continue_leaf(const Profile& old_profile, const Profile& new_profile,
                           const CylinderLeaf& leaf, double s_match, ContinuationReport* report,
                           const IntegrationOptions& opts) {
  ContinuationReport rep;
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  std::size_t k = 0;
  for (std::size_t i = 1; i < leaf.samples.size(); ++i)
    if (std::abs(leaf.samples[i].s - s_match) < std::abs(leaf.samples[k].s - s_match)) k = i;
  for (std::size_t i = k; i < leaf.samples.size(); ++i) {
    lo = std::min(lo, leaf.samples[i].rho);
    hi = std::max(hi, leaf.samples[i].rho);
  }
  if (lo < new_profile.rho_min() || hi > new_profile.rho_max())
    throw Error(ErrorCode::Matching, "new profile does not cover the matched part of the leaf");
  rep.matching_lo = lo;
  rep.matching_hi = hi;
  constexpr Channel channels[] = {Channel::F, Channel::G, Channel::Beta};
  constexpr int points = 400;
  for (int i = 0; i <= points; ++i) {
    const double r = lo + (hi - lo) * i / points;
    for (Channel ch : channels) {
      for (int order = 0; order <= 1; ++order) {
        const double u = old_profile.eval(r, ch, order), v = new_profile.eval(r, ch, order);
        if (std::abs(u - v) > 1e-12 * std::max(1.0, std::abs(u))) {
          std::ostringstream os;
          os.precision(17);
          os << "profiles disagree at rho = " << r << " on the matched part of the leaf";
          throw Error(ErrorCode::Matching, os.str());
        }
      }
    }
  }
  const double common_lo = std::max(old_profile.rho_min(), new_profile.rho_min());
  const double common_hi = std::min(old_profile.rho_max(), new_profile.rho_max());
  for (int i = 0; i <= 2000; ++i) {
    const double r = common_lo + (common_hi - common_lo) * i / 2000;
    for (Channel ch : channels)
      for (int order = 0; order <= 1; ++order)
        rep.c1_distance = std::max(rep.c1_distance,
                                   std::abs(old_profile.eval(r, ch, order) - new_profile.eval(r, ch, order)));
  }

  CylinderLeaf out = reintegrate_below(new_profile, leaf, leaf.samples[k].s, opts);

  // Under the ansatz theta and phi do not depend on s.
  const double theta_s = 0.0, phi_s = 0.0;
  const double theta_t = out.q, phi_t = -2.0 * std::numbers::pi * out.p;
  rep.integrability_rho = theta_s * phi_t - theta_t * phi_s;
  rep.integrability_a = theta_s * phi_t - theta_t * phi_s;
  if (rep.integrability_rho != 0.0 || rep.integrability_a != 0.0)
    throw Error(ErrorCode::Construction, "integrability residual under the ansatz is nonzero");

  const double s_k = leaf.samples[k].s;
  std::size_t j = 0;
  for (const auto& x : leaf.samples) {
    if (x.s < s_k) continue;
    while (j < out.samples.size() && out.samples[j].s < x.s) ++j;
    if (j < out.samples.size() && out.samples[j].s == x.s)
      rep.max_deviation_above = std::max({rep.max_deviation_above, std::abs(out.samples[j].rho - x.rho),
                                          std::abs(out.samples[j].a - x.a)});
    else
      rep.max_deviation_above = HUGE_VAL;
  }
  if (report) *report = rep;
  return out;
}

}  // namespace reebfol
