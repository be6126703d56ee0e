#include "reebfol/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "reebfol/curve_builder.hpp"
#include "reebfol/error.hpp"
#include "reebfol/hermite.hpp"
#include "reebfol/orbits.hpp"

namespace reebfol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

std::vector<SegmentData> clip(const Profile& profile, double lo, double hi) {
  std::vector<SegmentData> out;
  for (const Segment& s : profile.segments()) {
    if (s.hi() <= lo || s.lo() >= hi) continue;
    SegmentData d = s.data();
    d.lo = std::max(d.lo, lo);
    d.hi = std::min(d.hi, hi);
    out.push_back(std::move(d));
  }
  return out;
}

double wrap_positive(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

/// Even degree-8 beta on [0, delta] with beta(0) = beta(delta) and the
/// outer 4-jet at delta.
Coeffs core_beta(const Profile& outer, double delta) {
  const Jet j = outer.jet(delta);
  const Jet4 jb{j.beta[0], j.beta[1], j.beta[2], j.beta[3]};
  for (double b0 : {jb[0], 1.0, 0.5 * jb[0], 2.0 * jb[0]}) {
    const Coeffs beta = even_axis_fit(delta, b0, jb);
    const Coeffs local = to_local(beta, 0.0, delta);
    if (b0 > 0.0 && real_roots(local, 0.0, 1.0).roots.empty()) return beta;
  }
  throw Error(ErrorCode::Construction, "no positive extension of beta to the axis");
}

bool positive_on_segments(const Profile& profile, Channel ch) {
  for (const Segment& s : profile.segments())
    if (!positivity_failures(s, s.local(ch, 0), s.lo(), s.hi(), false).empty()) return false;
  return true;
}

std::optional<Profile> try_profile(std::vector<SegmentData> segs) {
  try {
    return Profile(std::move(segs));
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct Attempt {
  InnerCurveParams par;
  SplineLayout layout;
};

std::vector<Attempt> attempts(const InnerCurveParams& base, double span) {
  std::vector<Attempt> out;
  const double chi_base = span / (base.delta * base.delta);
  for (double t1 : {0.4, 0.3, 0.5, 0.6}) {
    for (int pieces : {2, 1, 3}) {
      for (double chi : {1.0, 0.5, 1.5, 0.25, 2.0, 0.75}) {
        for (double f0 : {1.0, 0.8, 1.25, 0.6, 1.6}) {
          Attempt a{base, {t1, pieces}};
          a.par.chi1 = chi * chi_base;
          a.par.f0 = base.f0 * f0;
          out.push_back(a);
        }
      }
    }
  }
  return out;
}

template <class Certify>
std::optional<Profile> search_core(const Profile& outer, double delta, const InnerCurveParams& base,
                                   const Coeffs& beta, Certify&& certify, std::string* layout) {
  const PlaneJet at_delta = plane_jet(outer, delta);
  const std::vector<SegmentData> above = clip(outer, delta, outer.rho_max());
  const double span = base.psi_delta - base.psi0;
  for (const Attempt& a : attempts(base, span)) {
    const auto curve = InnerCurve::build(at_delta, a.par);
    if (!curve) continue;
    std::vector<SegmentData> segs = spline_inner_curve(*curve, a.layout, at_delta, beta);
    segs.insert(segs.end(), above.begin(), above.end());
    auto prof = try_profile(std::move(segs));
    if (!prof || !certify(*prof)) continue;
    if (layout) {
      std::ostringstream os;
      os.precision(6);
      os << "t1=" << a.layout.t1_fraction << "*delta pieces=" << a.layout.septic_pieces
         << " chi1=" << a.par.chi1 << " f0=" << a.par.f0;
      *layout = os.str();
    }
    return prof;
  }
  return std::nullopt;
}

std::vector<double> roots_on(const Profile& profile, Channel ch, int order, double lo, double hi) {
  std::vector<double> out;
  for (const Segment& s : profile.segments()) {
    const double a = std::max(lo, s.lo()), b = std::min(hi, s.hi());
    if (a >= b) continue;
    const RootSet rs = real_roots(s.local(ch, order), s.to_u(a), s.to_u(b));
    for (double u : rs.roots) {
      const double r = s.from_u(u);
      if (r > lo && r < hi && (out.empty() || r - out.back() > 1e-12)) out.push_back(r);
    }
  }
  return out;
}

bool central_ok(const Profile& profile, int k) {
  const CentralOrbit c = central_cz(profile, k);
  return !c.degenerate && !c.borderline;
}

}  // namespace

void SurgeryMatrix::require_sl2z() const {
  if (det() != 1) {
    std::ostringstream os;
    os << "surgery matrix (" << n << "," << q << ";" << m << "," << p << ") has determinant "
       << det() << ", expected 1";
    throw Error(ErrorCode::Matrix, os.str());
  }
}

SurgeryMatrix SurgeryMatrix::operator*(const SurgeryMatrix& o) const {
  return {n * o.n + q * o.m, n * o.q + q * o.p, m * o.n + p * o.m, m * o.q + p * o.p};
}

std::string to_string(TwistKind kind) {
  switch (kind) {
    case TwistKind::None: return "none";
    case TwistKind::Half: return "half";
    case TwistKind::Full: return "full";
  }
  return "none";
}

TwistKind twist_from_string(const std::string& s) {
  if (s == "none") return TwistKind::None;
  if (s == "half") return TwistKind::Half;
  if (s == "full") return TwistKind::Full;
  throw Error(ErrorCode::Input, "twist kind must be half, full or none");
}

Profile lutz_twist(const Profile& profile, TwistKind kind, double delta,
                   std::optional<double> epsilon) {
  if (kind == TwistKind::None) return profile;
  const double eps = epsilon.value_or(profile.rho_max());
  if (!(profile.reaches_axis() && delta > 0.0 && delta <= eps && eps <= profile.rho_max()))
    throw Error(ErrorCode::Precondition, "Lutz twist needs 0 < delta <= epsilon <= rho_max");
  for (int i = 0; i <= 100; ++i) {
    const double r = delta + (eps - delta) * i / 100.0;
    const Jet j = profile.jet(r);
    if (std::abs(j.f[0] - 1.0) > 1e-9 || std::abs(j.g[0] - r * r) > 1e-9 ||
        std::abs(j.f[1]) > 1e-9 || std::abs(j.g[1] - 2.0 * r) > 1e-9)
      throw Error(ErrorCode::Precondition, "profile is not (1, rho^2) on [delta, epsilon]");
  }
  const bool half = kind == TwistKind::Half;
  const Coeffs beta = core_beta(profile, delta);

  auto certify = [&](const Profile& p) {
    if (!validate_contact(p).valid || !positive_on_segments(p, Channel::Beta)) return false;
    const double f0 = p.eval(0.0, Channel::F, 0);
    if (half ? !(f0 < 0.0) : !(f0 > 0.0)) return false;
    const auto g_zero = roots_on(p, Channel::G, 0, 0.0, delta);
    if (g_zero.empty() || (half && g_zero.size() != 1) || (!half && g_zero.size() != 2)) return false;
    const auto turn = roots_on(p, Channel::G, 1, 0.0, delta);
    if (turn.size() != (half ? 1u : 2u)) return false;
    bool has_rho1 = false;
    for (double r : turn) {
      if (std::abs(morse_bott_value(p, r)) <= 1e3 * kMorseBottThreshold) return false;
      if (r < g_zero.back() && p.eval(r, Channel::F, 1) > 0.0) has_rho1 = true;
    }
    return has_rho1 && central_ok(p, 1);
  };
  const PlaneJet at_delta = plane_jet(profile, delta);
  const std::vector<SegmentData> above = clip(profile, delta, profile.rho_max());
  PolarCurveParams par;
  par.delta = delta;
  par.alpha0 = half ? kPi : 0.0;
  par.alpha_delta = std::arg(at_delta.d[0]) + kTwoPi;
  for (double r0 : {1.0, 0.5, 0.75, 1.5, 0.3}) {
    par.r0 = r0 * std::abs(at_delta.d[0]);
    const auto curve = PolarCurve::build(at_delta, par);
    if (!curve) continue;
    for (double t1 : {0.15, 0.1, 0.25, 0.4}) {
      for (int pieces : {4, 6, 3, 8}) {
        std::vector<SegmentData> segs = spline_inner_curve(*curve, {t1, pieces}, at_delta, beta);
        segs.insert(segs.end(), above.begin(), above.end());
        auto prof = try_profile(std::move(segs));
        if (prof && certify(*prof)) return *prof;
      }
    }
  }
  throw Error(ErrorCode::Construction, "Lutz twist: no candidate passed certification");
}

Profile surgery_pullback(const Profile& profile, const SurgeryMatrix& matrix, double delta,
                         double epsilon) {
  matrix.require_sl2z();
  if (!(delta >= profile.rho_min() && delta < epsilon && epsilon <= profile.rho_max()))
    throw Error(ErrorCode::Domain, "pullback interval must lie inside the profile domain");
  std::vector<SegmentData> segs = clip(profile, delta, epsilon);
  for (SegmentData& s : segs) {
    const Coeffs f = s.f, g = s.g;
    s.f = combine(matrix.n, f, kTwoPi * matrix.m, g);
    s.g = combine(matrix.q / kTwoPi, f, matrix.p, g);
  }
  return Profile(std::move(segs));
}

Profile extend_core(const Profile& outer, const CoreConstraints& cons, CoreReport* report) {
  if (!(cons.gap > 0.0)) throw Error(ErrorCode::Construction, "condition (4) gap must be positive");
  const auto [p, q] = normalize_slope(cons.p, cons.q);
  const double delta = outer.rho_min();
  if (!(delta > 0.0)) throw Error(ErrorCode::Precondition, "outer profile must start at delta > 0");
  if (!validate_contact(outer).valid)
    throw Error(ErrorCode::Precondition, "outer profile is not contact on [delta, epsilon]");

  CoreReport rep;
  std::optional<double> r_smallest;
  try {
    const auto tori = scan_tori(outer, p, q, delta, outer.rho_max());
    if (!tori.empty()) {
      rep.rho1 = tori.back().r;
      r_smallest = tori.front().r;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ContinuumOfTori) throw;
  }
  const double q_delta = slope_residual(outer, delta, p, q);
  const double sigma_q = q_delta > 0.0 ? 1.0 : -1.0;

  auto certify = [&](const Profile& prof, CoreReport& r) {
    r.contact = validate_contact(prof).valid && positive_on_segments(prof, Channel::Beta);
    if (!r.contact) return false;
    if (!rep.rho1) {
      r.inward_acceleration = r.no_core_torus = r.central_nondegenerate = true;
      return true;
    }
    r.inward_acceleration =
        positivity_failures(prof, 0.0, *rep.rho1, [](const Segment& s) { return acceleration_poly(s); })
            .empty();
    r.no_core_torus =
        q_delta != 0.0 &&
        positivity_failures(prof, 0.0, delta, [&](const Segment& s) {
          return scaled(slope_poly(s, p, q), sigma_q);
        }).empty();
    r.central_nondegenerate = central_ok(prof, 1) && (q == 0 || central_ok(prof, std::abs(q)));
    bool gap_ok = true;
    if (q != 0) {
      const Jet jr = prof.jet(*r_smallest), j0 = prof.jet(0.0);
      r.slope_gap = jr.f[1] / jr.g[1] - j0.f[2] / j0.g[2];
      gap_ok = *r.slope_gap > 0.0 && *r.slope_gap <= cons.gap;
    }
    return r.inward_acceleration && r.no_core_torus && r.central_nondegenerate && gap_ok;
  };

  // The outer's innermost polynomial may already be smooth at the axis.
  {
    const Segment& first = outer.segments().front();
    SegmentData d = first.data();
    d.lo = 0.0;
    std::vector<SegmentData> segs{d};
    const auto above = clip(outer, first.hi(), outer.rho_max());
    segs.insert(segs.end(), above.begin(), above.end());
    if (auto prof = try_profile(std::move(segs))) {
      CoreReport r = rep;
      r.trivial = true;
      r.layout = "trivial";
      if (certify(*prof, r)) {
        if (report) *report = r;
        return *prof;
      }
    }
  }

  if (q_delta == 0.0) throw Error(ErrorCode::Construction, "a torus of the requested type sits at delta");
  const PlaneJet at_delta = plane_jet(outer, delta);
  const double arg_delta = std::arg(at_delta.d[1]);
  InnerCurveParams base;
  base.delta = delta;
  if (q != 0) {
    const double c = kTwoPi * p / q - 0.5 * cons.gap;
    const double s = -(q > 0 ? 1.0 : -1.0) * sigma_q;
    base.psi0 = std::atan2(s, s * c);
    base.psi_delta = base.psi0 + wrap_positive(arg_delta - base.psi0);
    if (base.psi_delta - base.psi0 >= kPi)
      throw Error(ErrorCode::Construction,
                  "the tangent at delta leaves the half-plane where the slope condition can hold");
  } else {
    // g' keeps the sign it has at delta; the tangent stays strictly between
    // two consecutive horizontal directions.
    const double g_sign = -(p > 0 ? 1.0 : -1.0) * sigma_q;
    const double edge0 = g_sign > 0.0 ? 0.0 : kPi;
    const double edge = arg_delta - wrap_positive(arg_delta - edge0);
    base.psi_delta = arg_delta;
    double frac = 0.5;
    base.psi0 = edge + frac * (arg_delta - edge);
    while (std::abs(std::remainder(1.0 / std::tan(base.psi0) / kTwoPi, 1.0)) < 1e-3 && frac > 0.1) {
      frac -= 0.05;
      base.psi0 = edge + frac * (arg_delta - edge);
    }
  }
  base.f0 = (std::sin(base.psi0) > 0.0 ? 1.0 : -1.0) * std::abs(at_delta.d[0]);
  const Coeffs beta = core_beta(outer, delta);

  CoreReport best = rep;
  auto certify_keep = [&](const Profile& prof) {
    CoreReport r = rep;
    const bool ok = certify(prof, r);
    if (ok) best = r;
    return ok;
  };
  std::string layout;
  for (double scale : {1.0, 0.5, 0.25}) {
    InnerCurveParams b = base;
    b.f0 = base.f0 * scale;
    if (auto prof = search_core(outer, delta, b, beta, certify_keep, &layout)) {
      best.layout = layout;
      if (report) *report = best;
      return *prof;
    }
  }
  throw Error(ErrorCode::Construction, "core extension: no candidate satisfied the conditions");
}

SurgeryResult perform_surgery(const Profile& base, const SurgeryPlan& plan) {
  plan.matrix.require_sl2z();
  if (!(plan.delta > 0.0 && plan.delta < plan.epsilon && plan.epsilon <= base.rho_max()))
    throw Error(ErrorCode::Precondition, "surgery needs 0 < delta < epsilon <= rho_max");
  Profile lambda1 = base;
  if (plan.twist != TwistKind::None) {
    lambda1 = lutz_twist(base, plan.twist, plan.epsilon);
  } else {
    const Jet j = base.jet(plan.epsilon);
    const double e = plan.epsilon;
    if (std::abs(j.f[0] - 1.0) > 1e-9 || std::abs(j.g[0] - e * e) > 1e-9)
      throw Error(ErrorCode::Precondition, "base is not (1, rho^2) near epsilon");
  }
  std::optional<double> rho1;
  try {
    const auto t = scan_tori(lambda1, 1, 0, 1e-9, plan.epsilon);
    if (!t.empty()) rho1 = t.back().r;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ContinuumOfTori) throw;
  }
  if (rho1 && !(plan.delta < *rho1)) {
    std::ostringstream os;
    os.precision(17);
    os << "delta must lie below the innermost Lutz radius " << *rho1;
    throw Error(ErrorCode::Precondition, os.str());
  }
  const Profile outer = surgery_pullback(lambda1, plan.matrix, plan.delta, plan.epsilon);
  CoreReport core;
  Profile full = extend_core(outer, {plan.matrix.n, plan.matrix.q, plan.gap}, &core);
  return {std::move(full), core, rho1};
}

LiftArithmetic cover_lift(const std::vector<long long>& linking_numbers) {
  if (linking_numbers.empty()) throw Error(ErrorCode::Input, "need at least one linking number");
  LiftArithmetic out;
  out.linking_numbers = linking_numbers;
  long long n = 1;
  for (long long l : linking_numbers) {
    if (l <= 0) throw Error(ErrorCode::Input, "linking numbers must be positive");
    n = std::lcm(n, l);
  }
  out.n = n;
  for (long long l : linking_numbers) {
    const long long g = std::gcd(n, l);
    out.components.push_back({g, l / g});
  }
  return out;
}

std::pair<long long, long long> orbit_homology_class(const SurgeryMatrix& m,
                                                     std::pair<long long, long long> c) {
  m.require_sl2z();
  const auto [a, b] = c;  // meridian, longitude
  return {static_cast<long long>(m.p) * b - static_cast<long long>(m.q) * a,
          -static_cast<long long>(m.m) * b + static_cast<long long>(m.n) * a};
}

}  // namespace reebfol
