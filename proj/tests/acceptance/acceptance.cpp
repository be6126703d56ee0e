#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "reebfol/cylinders.hpp"
#include "reebfol/error.hpp"
#include "reebfol/families.hpp"
#include "reebfol/foliation.hpp"
#include "reebfol/orbits.hpp"
#include "reebfol/profile_io.hpp"
#include "reebfol/surgery.hpp"

using namespace reebfol;

namespace {

const std::string kData = REEBFOL_DATA_DIR;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Tolerances and budgets of the criteria.
constexpr double kContactSeconds = 1.0;
constexpr double kReebTol = 1e-12;
constexpr double kPeriodRelTol = 1e-6;
constexpr double kPeriodFormulaTol = 1e-10;
constexpr double kPeriodSeconds = 10.0;
constexpr double kCzSeconds = 60.0;
constexpr double kCrTol = 1e-8;
constexpr double kGapTol = 1e-4;
constexpr double kSlopeTol = 1e-4;
constexpr double kPlaneCut = -10.0;
constexpr double kEnergyTol = 1e-6;
constexpr double kWronskianTol = 1e-12;
constexpr double kFoliationSeconds = 60.0;
constexpr double kContinuationTol = 1e-9;

Profile fixture(const std::string& name) { return load_profile(kData + "/" + name + ".json"); }

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Criterion = std::function<void(Outcome&)>;

SurgeryMatrix random_sl2z(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  SurgeryMatrix m;
  for (int i = 0; i < 4; ++i) {
    switch (pick(rng)) {
      case 0: m = m * SurgeryMatrix{1, 1, 0, 1}; break;
      case 1: m = m * SurgeryMatrix{1, 0, 1, 1}; break;
      case 2: m = m * SurgeryMatrix{1, -1, 0, 1}; break;
      default: m = m * SurgeryMatrix{0, -1, 1, 0}; break;
    }
  }
  return m;
}

bool strictly_monotone(const CylinderLeaf& leaf) {
  for (std::size_t i = 1; i < leaf.samples.size(); ++i)
    if (!(leaf.samples[i].rho > leaf.samples[i - 1].rho) || !(leaf.samples[i].s > leaf.samples[i - 1].s))
      return false;
  return true;
}

// The shipped fixtures with the slope each is foliated along.
struct FixtureSlope {
  std::string name;
  int p, q;
};

const std::vector<FixtureSlope>& foliated_fixtures() {
  static const std::vector<FixtureSlope> list = {
      {"half_lutz", 1, 0}, {"full_lutz", 1, 0}, {"surgery_q1", 1, 1}, {"stabilized_chart", 1, 1}};
  return list;
}

struct FoliatedFixture {
  FixtureSlope slope;
  Profile profile;
  FoliationReport report;
};

const std::vector<FoliatedFixture>& foliations() {
  static const std::vector<FoliatedFixture> all = [] {
    std::vector<FoliatedFixture> out;
    for (const auto& f : foliated_fixtures()) {
      Profile prof = fixture(f.name);
      FoliationReport rep = build_foliation(prof, f.p, f.q);
      out.push_back({f, std::move(prof), std::move(rep)});
    }
    return out;
  }();
  return all;
}

void contact_validation(Outcome& o) {
  const Timer t;
  const ContactReport std_form = validate_contact(fixture("lambda0"));
  const ContactReport mutant = validate_contact(fixture("mirrored"));
  const double elapsed = t.seconds();
  o.require(std_form.valid, "lambda0 valid");
  o.require(std_form.d_prime_at_zero && *std_form.d_prime_at_zero == 2.0, "D'(0) == 2");
  o.require(!mutant.valid, "mirrored rejected");
  o.require(elapsed < kContactSeconds, "runtime");
  o.detail << "D'(0) = " << std_form.d_prime_at_zero.value_or(NAN) << ", mirrored violations "
           << mutant.violations.size() << ", " << elapsed << " s";
}

void reeb_oracle(Outcome& o) {
  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Profile p = random_contact_profile(rng);
    for (int k = 0; k < 5; ++k) {
      const double r = p.rho_max() * (0.05 + 0.19 * k);
      const ReebField x = reeb_field(p, r);
      const Jet j = p.jet(r);
      worst = std::max({worst, std::abs(j.f[0] * x.theta + j.g[0] * x.phi - 1.0),
                        std::abs(j.f[1] * x.theta + j.g[1] * x.phi)});
    }
  }
  o.require(worst < kReebTol, "residual");
  o.detail << "max residual " << worst << " over 100 points";
}

void period_vs_flow(Outcome& o) {
  const Timer t;
  const Profile lutz = fixture("half_lutz");
  const auto tori = scan_tori(lutz, 1, 0, 1e-6, 0.5);
  o.require(!tori.empty(), "half Lutz torus");
  double rel = HUGE_VAL;
  if (!tori.empty()) {
    const double r1 = tori.front().r;
    const double formula = torus_period(lutz, r1, 1, 0), flow = reeb_return_time(lutz, r1, 1, 0);
    rel = std::abs(formula - flow) / std::abs(formula);
  }
  o.require(rel < kPeriodRelTol, "period vs return time");

  // T = q D / g' and T = 2 pi p D / f' wherever both denominators are nonzero;
  // a negative value means the orbit runs along (-p, -q).
  double worst = 0.0;
  int compared = 0;
  for (auto [name, p, q] : {std::tuple{"surgery_q1", 1, 1}, std::tuple{"full_lutz", 1, 1},
                            std::tuple{"stabilized_chart", 1, 1}, std::tuple{"half_lutz", 2, 1}}) {
    const Profile prof = fixture(name);
    for (const auto& torus : scan_tori(prof, p, q, 1e-6, prof.rho_max())) {
      const Jet j = prof.jet(torus.r);
      const double d = j.f[0] * j.g[1] - j.f[1] * j.g[0];
      if (j.g[1] == 0.0 || j.f[1] == 0.0) continue;
      const double via_g = q * d / j.g[1], via_f = kTwoPi * p * d / j.f[1];
      worst = std::max({worst, std::abs(via_g - via_f), std::abs(torus.T - std::abs(via_g))});
      ++compared;
    }
  }
  o.require(compared > 0, "torus with both expressions");
  o.require(worst < kPeriodFormulaTol, "two expressions");
  const double elapsed = t.seconds();
  o.require(elapsed < kPeriodSeconds, "runtime");
  o.detail << "relative period error " << rel << ", expressions differ by " << worst << " on " << compared
           << " tori, " << elapsed << " s";
}

void cz_oracle(Outcome& o) {
  const Timer t;
  std::vector<Profile> profiles;
  for (double curvature : {0.005, 0.01, 0.02, 0.03, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8}) {
    StabilizationShape shape;
    shape.curvature = curvature;
    profiles.push_back(stabilized_chart_profile(shape));
  }
  std::mt19937_64 rng(2024);
  while (profiles.size() < 100) profiles.push_back(random_contact_profile(rng));
  int mismatches = 0, degenerate = 0;
  for (const Profile& p : profiles) {
    for (int k = 1; k <= 5; ++k) {
      const CentralOrbit c = central_cz(p, k);
      const WindingResult w = winding_oracle(p, k);
      if (c.degenerate != w.degenerate || c.cz != w.cz) ++mismatches;
      degenerate += c.degenerate;
    }
  }
  const double elapsed = t.seconds();
  o.require(mismatches == 0, "closed form vs winding");
  o.require(elapsed < kCzSeconds, "runtime");
  o.detail << profiles.size() << " profiles x 5 covers, " << mismatches << " mismatches, " << degenerate
           << " degenerate verdicts, " << elapsed << " s";
}

void leaf_correctness(Outcome& o) {
  int leaves = 0;
  double worst_cr = 0.0, worst_gap = 0.0;
  for (const auto& f : foliations()) {
    for (const CylinderLeaf& l : f.report.leaves) {
      ++leaves;
      worst_cr = std::max(worst_cr, cr_residual(l, f.profile));
      o.require(strictly_monotone(l), f.slope.name + " monotone rho");
      for (const Puncture* e : {&l.minus, &l.plus})
        if (e->target != EndTarget::Open) worst_gap = std::max(worst_gap, e->gap);
    }
  }
  o.require(worst_cr < kCrTol, "cr residual");
  o.require(worst_gap < kGapTol, "asymptote gap");

  // q = 0 plane: the sampled variation of a below an interior cut sits under
  // the tail bound built from the samples above it, and the same bound covers
  // everything below s = -10, which lies past the first sample.
  const Profile lutz = fixture("half_lutz");
  const CylinderLeaf plane = integrate_cylinder(lutz, 1, 0, 0.1);
  const double first = plane.samples.front().s;
  const double cut = 0.5 * first;
  const double sampled = total_variation_below(plane, cut);
  const double bound = plane_tail_bound(truncate_leaf(plane, cut, plane.samples.back().s), lutz);
  o.require(plane.plane && sampled > 0.0 && sampled <= bound, "sampled tail under the bound");
  const double tail_below = total_variation_below(plane, kPlaneCut) +
                            (first > kPlaneCut ? plane_tail_bound(plane, lutz) : 0.0);
  o.require(std::isfinite(tail_below) && tail_below <= bound, "variation below s = -10 bounded");

  // q != 0 core cylinder: a grows linearly with slope q f(0).
  const Profile s = fixture("surgery_q1");
  const CylinderLeaf core = integrate_cylinder(s, 1, 1, 0.15);
  const auto& sm = core.samples;
  const double slope = (sm[1].a - sm[0].a) / (sm[1].s - sm[0].s);
  const double expected = core.q * s.eval(0.0, Channel::F, 0);
  o.require(std::abs(slope - expected) < kSlopeTol, "linear growth slope");
  o.detail << leaves << " leaves, max cr " << worst_cr << ", max gap " << worst_gap << ", plane tail "
           << sampled << " <= " << bound << ", below -10 at most " << tail_below << ", slope error " << std::abs(slope - expected);
}

void energy_stokes(Outcome& o) {
  double worst = 0.0, excess = -HUGE_VAL;
  int leaves = 0;
  for (const auto& f : foliations()) {
    for (const CylinderLeaf& l : f.report.leaves) {
      const EnergyReport e = dlambda_energy(l, f.profile);
      ++leaves;
      worst = std::max(worst, std::abs(e.numeric - e.boundary_term) / (1.0 + std::abs(e.boundary_term)));
      if (e.period_plus && e.period_minus && l.plus.resolved && l.minus.resolved &&
          l.plus.target != EndTarget::Open && l.minus.target != EndTarget::Open)
        excess = std::max(excess, e.numeric - *e.period_plus - *e.period_minus);
    }
  }
  o.require(worst < kEnergyTol, "energy vs boundary term");
  o.require(excess <= kEnergyTol, "energy below the periods");
  o.detail << leaves << " leaves, max relative mismatch " << worst << ", max E - (T+ + T-) " << excess;
}

void sign_and_index(Outcome& o) {
  const Profile s = fixture("surgery_q1");
  int tori = 0;
  for (const auto& torus : scan_tori(s, 1, 1, 1e-6, s.rho_max())) {
    o.require(puncture_sign(s, torus.r) == 1, "torus sign");
    ++tori;
  }
  o.require(tori > 0, "surgery fixture has tori");

  // Central signs on leaf-normalized slopes whose cover is nondegenerate.
  std::vector<Profile> axis_profiles = {s, fixture("stabilized_chart"), fixture("half_lutz"), fixture("full_lutz")};
  std::mt19937_64 rng(7);
  for (int i = 0; i < 30; ++i) axis_profiles.push_back(random_contact_profile(rng));
  int checked = 0, broken = 0;
  for (const Profile& prof : axis_profiles) {
    for (auto [p0, q0] : {std::pair{1, 1}, std::pair{0, 1}, std::pair{1, 2}, std::pair{-1, 1}, std::pair{2, 3}}) {
      try {
        const auto [lo, hi] = elementary_interval(prof, p0, q0, 1e-3);
        const auto [p, q] = sign_convention(prof, lo, hi, p0, q0);
        if (central_cz(prof, std::abs(q)).degenerate) continue;
        const std::optional<double> top = hi < prof.rho_max() ? std::optional(hi) : std::nullopt;
        const int sigma = central_puncture_sign(prof, p, q, top);
        ++checked;
        if (sigma != -sgn(q) * sgn(prof.eval(0.0, Channel::G, 2))) ++broken;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::SignConvention) {
          ++checked;
          ++broken;
        }
      }
    }
  }
  o.require(checked > 0 && broken == 0, "central sign identity");

  const int central_index = cylinder_index(s, 1, 1, central_puncture_sign(s, 1, 1, scan_tori(s, 1, 1, 1e-6, s.rho_max()).front().r));
  o.require(central_index == 2, "cylinder index on the surgery fixture");
  int indexed = 0, low = 0;
  for (const auto& f : foliations())
    for (const CylinderLeaf& l : f.report.leaves)
      if (l.index) {
        ++indexed;
        low += *l.index < 2;
      }
  o.require(low == 0, "every index >= 2");
  for (int m = 0; m <= 6; ++m) {
    CurveTopology topo;
    topo.punctures = 1;
    topo.boundary = m;
    o.require(topo.euler() == 1 - m && fredholm_index(3 - 2 * m, topo) == 2, "fredholm m = " + std::to_string(m));
  }
  o.detail << tori << " tori with sign +1, " << checked << " central cases (" << broken
           << " broken), surgery index " << central_index << ", " << indexed << " indexed leaves";
}

void surgery_algebra(Outcome& o) {
  const Profile lutz = fixture("half_lutz");
  const Profile same = surgery_pullback(lutz, SurgeryMatrix::identity(), lutz.rho_min(), lutz.rho_max());
  bool bitwise = same.segments().size() == lutz.segments().size();
  for (std::size_t i = 0; bitwise && i < lutz.segments().size(); ++i)
    for (Channel ch : {Channel::F, Channel::G, Channel::Beta})
      bitwise = bitwise && same.segments()[i].global(ch) == lutz.segments()[i].global(ch) &&
                same.segments()[i].lo() == lutz.segments()[i].lo() && same.segments()[i].hi() == lutz.segments()[i].hi();
  o.require(bitwise, "identity pullback");

  // The profile a surgery actually pulls back: the twisted form on its window.
  const Profile twisted = lutz_twist(standard_profile(), TwistKind::Half, 0.8);
  constexpr double lo = 0.3, hi = 0.8;
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SurgeryMatrix m = random_sl2z(rng);
    const Profile out = surgery_pullback(twisted, m, lo, hi);
    for (int i = 0; i <= 200; ++i) {
      const double r = lo + (hi - lo) * i / 200.0;
      worst = std::max(worst, std::abs(wronskian(out, r) - wronskian(twisted, r)));
    }
  }
  o.require(worst < kWronskianTol, "Wronskian invariance");

  bool classes = true;
  for (int trial = 0; trial < 20; ++trial) {
    const SurgeryMatrix m = random_sl2z(rng);
    classes = classes && orbit_homology_class(m, {-1, 0}) == std::pair<long long, long long>{m.q, -m.n};
  }
  o.require(classes, "homology class");

  const LiftArithmetic three = cover_lift({3});
  o.require(three.n == 3 && three.components.size() == 1 && three.components[0].count == 3 &&
                three.components[0].lk_each == 1,
            "cover_lift([3])");
  std::mt19937_64 lift_rng(11);
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_int_distribution<long long> value(1, 30);
  int conserved = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<long long> l(size(lift_rng));
    for (auto& x : l) x = value(lift_rng);
    const LiftArithmetic lift = cover_lift(l);
    bool ok = lift.components.size() == l.size();
    for (std::size_t j = 0; ok && j < l.size(); ++j)
      ok = lift.components[j].count * lift.components[j].lk_each == l[j];
    conserved += ok;
  }
  o.require(conserved == 1000, "linking conservation");
  o.detail << "identity bitwise " << (bitwise ? "yes" : "no") << ", max |D_K - D| " << worst
           << " for 20 matrices, lift conservation " << conserved << "/1000";
}

void foliation_certificate(Outcome& o) {
  const Timer t;
  const Profile lutz = fixture("half_lutz");
  const FoliationReport rep = build_foliation(lutz, 1, 0);
  const DisjointnessReport dis = disjointness_check(rep, 500, 1);
  const double elapsed = t.seconds();
  const long annuli = std::count_if(rep.regions.begin(), rep.regions.end(),
                                    [](const Region& r) { return r.kind == RegionKind::Annulus; });
  o.require(rep.stability.stable, "stable");
  o.require(annuli == 1 && rep.regions.size() == 2 && rep.regions.back().kind == RegionKind::Core,
            "one annulus and the core");
  int planes = 0, core = 0;
  for (std::size_t i = 0; i < rep.leaves.size(); ++i) {
    if (rep.regions[rep.leaf_region[i]].kind != RegionKind::Core) continue;
    ++core;
    planes += rep.leaves[i].plane;
  }
  o.require(core > 0 && planes == core, "planes in the core");
  o.require(dis.disjoint && dis.pairs_checked == 500, "disjointness");
  o.require(elapsed < kFoliationSeconds, "runtime");
  o.detail << rep.leaves.size() << " leaves, " << planes << " core planes, min separation " << dis.min_separation
           << ", " << elapsed << " s";
}

void continuation(Outcome& o) {
  double worst = 0.0;
  for (auto [name, p, q, rho] : {std::tuple{"half_lutz", 1, 0, 0.1}, std::tuple{"half_lutz", 1, 0, 0.6},
                                 std::tuple{"surgery_q1", 1, 1, 0.15}, std::tuple{"full_lutz", 1, 0, 0.2}}) {
    const Profile prof = fixture(name);
    const CylinderLeaf leaf = integrate_cylinder(prof, p, q, rho);
    const CylinderLeaf again = continue_leaf(prof, prof, leaf, 0.0);
    std::size_t j = 0, matched = 0;
    for (const auto& x : leaf.samples) {
      while (j < again.samples.size() && again.samples[j].s < x.s) ++j;
      if (j == again.samples.size() || again.samples[j].s != x.s) continue;
      ++matched;
      worst = std::max({worst, std::abs(again.samples[j].rho - x.rho), std::abs(again.samples[j].a - x.a)});
    }
    o.require(matched == leaf.samples.size(), std::string(name) + " sample times");
  }
  o.require(worst < kContinuationTol, "unchanged continuation");

  const Profile old_profile = fixture("hopf_chart"), new_profile = fixture("stabilized_chart");
  const CylinderLeaf leaf = integrate_cylinder(old_profile, -1, -1, 0.33);
  const CylinderLeaf out = continue_leaf(old_profile, new_profile, leaf, 0.0);
  const bool nondegenerate = !central_cz(new_profile, std::abs(out.q)).degenerate;
  o.require(out.minus.target == EndTarget::Central && out.minus.resolved && nondegenerate,
            "asymptotic to the nondegenerate central orbit");
  o.require(out.samples.front().rho < kGapTol, "reaches the axis");
  o.detail << "max deviation " << worst << ", stabilized leaf ends at rho " << out.samples.front().rho
           << " on a " << (nondegenerate ? "nondegenerate" : "degenerate") << " central orbit";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Criterion>> criteria = {
      {"contact validation", contact_validation},   {"Reeb oracle", reeb_oracle},
      {"period vs flow", period_vs_flow},           {"CZ oracle equivalence", cz_oracle},
      {"leaf correctness", leaf_correctness},       {"energy and boundary term", energy_stokes},
      {"sign and index formulas", sign_and_index},  {"surgery algebra", surgery_algebra},
      {"foliation certificate", foliation_certificate}, {"continuation", continuation}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [threw: " << e.what() << "]";
    }
    failed += !o.pass;
    std::printf("criterion %2zu %-26s %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.str().c_str());
  }
  return failed == 0 ? 0 : 1;
}
