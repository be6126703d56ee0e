#include "reebfol/cylinders.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>

#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include "reebfol/error.hpp"
#include "reebfol/orbits.hpp"

namespace reebfol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

struct LeafField {
  const Profile& profile;
  int p, q;

  // rho' = F(rho), a' = A(rho).
  double F(double rho) const {
    const Jet j = profile.jet(rho);
    if (!(j.beta[0] > 0.0)) throw Error(ErrorCode::InvalidProfile, "beta <= 0 encountered");
    return (q * j.f[1] - kTwoPi * p * j.g[1]) / j.beta[0];
  }
  double A(double rho) const {
    const Jet j = profile.jet(rho);
    return q * j.f[0] - kTwoPi * p * j.g[0];
  }
  double dF(double rho) const {
    const Jet j = profile.jet(rho);
    const double Q = q * j.f[1] - kTwoPi * p * j.g[1];
    const double dQ = q * j.f[2] - kTwoPi * p * j.g[2];
    return (dQ * j.beta[0] - Q * j.beta[1]) / (j.beta[0] * j.beta[0]);
  }
  // Energy density Q^2 / beta and its s-derivative.
  std::array<double, 2> density(double rho) const {
    const Jet j = profile.jet(rho);
    const double Q = q * j.f[1] - kTwoPi * p * j.g[1];
    const double dQ = q * j.f[2] - kTwoPi * p * j.g[2];
    const double b = j.beta[0], db = j.beta[1];
    const double y = Q * Q / b;
    const double dy_drho = 2.0 * Q * dQ / b - Q * Q * db / (b * b);
    return {y, dy_drho * Q / b};
  }
};

// First-derivative weights at x0 for nodes x (Fornberg's recursion).
std::array<double, 5> fd_weights(double x0, const std::array<double, 5>& x) {
  double c[5][2] = {};
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = x[0] - x0;
  for (int i = 1; i < 5; ++i) {
    const int mn = std::min(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  return {c[0][1], c[1][1], c[2][1], c[3][1], c[4][1]};
}

struct EndSpec {
  double target = 0.0;   // radius approached
  double limit = 0.0;    // the radius may not cross this
  bool open = false;
};

struct HalfLeaf {
  std::vector<LeafSample> samples;
  bool resolved = false;
  double gap = 0.0;
};

// `stops` lists s values (in the direction of travel) the stepper must land on.
HalfLeaf integrate_half(const LeafField& field, double rho0, double a0, int dir, const EndSpec& end,
                        const IntegrationOptions& opts, std::span<const double> stops = {}) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  using Checker = odeint::default_error_checker<double, odeint::array_algebra, odeint::default_operations>;
  // Error relative to the increment dt |x'| rather than to |x|: the residual
  // of the Cauchy-Riemann system is the drift rate, not the drift.
  odeint::controlled_runge_kutta<odeint::runge_kutta_dopri5<State>, Checker> stepper(
      Checker(opts.atol, opts.rtol, 0.0, 1.0));
  auto system = [&field](const State& x, State& dx, double) {
    dx[0] = field.F(x[0]);
    dx[1] = field.A(x[0]);
  };
  HalfLeaf out;
  State x{rho0, a0};
  double s = 0.0;
  double dt = dir * 1e-3;
  int rejected = 0;
  std::size_t next_stop = 0;
  while (true) {
    const double speed = std::abs(field.F(x[0]));
    const double rate = std::abs(field.dF(x[0]));
    double limit = opts.max_ds;
    if (speed > 0.0) limit = std::min(limit, std::min(opts.target_drho, 0.5 * opts.max_drho) / speed);
    if (rate > 0.0) limit = std::min(limit, opts.max_rate_step / rate);
    if (std::abs(dt) > limit) dt = dir * limit;
    bool at_stop = false;
    if (next_stop < stops.size()) {
      const double remaining = stops[next_stop] - s;
      if (dir * (s + dt - stops[next_stop]) >= 0.0) {
        dt = remaining;
        at_stop = true;
      } else if (std::abs(remaining) < 1.5 * std::abs(dt)) {
        // Never leave a sliver before a stop.
        dt = 0.5 * remaining;
      }
    }
    State xt = x;
    double st = s, dtt = dt;
    if (stepper.try_step(system, xt, st, dtt) != odeint::success) {
      dt = dtt;
      if (++rejected > 100000) break;
      continue;
    }
    const bool crossed = dir > 0 ? (end.open ? xt[0] > end.limit : xt[0] >= end.limit)
                                 : (end.open ? xt[0] < end.limit : xt[0] <= end.limit);
    if (crossed || std::abs(xt[0] - x[0]) >= opts.max_drho) {
      // The stepper carries the derivative at xt forward; drop it.
      stepper.reset();
      const double frac = (end.limit - x[0]) / (xt[0] - x[0]);
      if (crossed && end.open && frac > 0.0 && frac < 1.0) dt *= frac * (1.0 - 1e-3 * opts.asymptote_tol);
      else dt *= 0.5;
      if (std::abs(dt) < 1e-15) break;
      continue;
    }
    // A state that no longer moves in normal floating point has reached its limit;
    // min_extent cannot be honoured past that.
    const bool frozen = xt[0] == x[0] || std::abs(xt[0]) < std::numeric_limits<double>::min();
    if (frozen && std::abs(x[0] - end.target) < opts.asymptote_tol && next_stop >= stops.size()) {
      out.resolved = true;
      break;
    }
    x = xt;
    s = st;
    dt = dtt;
    if (at_stop) s = stops[next_stop++];
    out.samples.push_back({s, x[1], x[0]});
    out.gap = std::abs(x[0] - end.target);
    if (out.gap < opts.asymptote_tol && next_stop >= stops.size() &&
        (end.open || std::abs(s) >= opts.min_extent)) {
      out.resolved = true;
      break;
    }
    if (std::abs(s) > opts.s_max) break;
  }
  return out;
}

bool is_root(const std::vector<OrbitTorus>& tori, double r) {
  for (const auto& t : tori)
    if (std::abs(t.r - r) <= 1e-12) return true;
  return false;
}

}  // namespace

std::string to_string(EndTarget t) {
  switch (t) {
    case EndTarget::Torus: return "torus";
    case EndTarget::Central: return "central";
    case EndTarget::Removable: return "removable";
    case EndTarget::Open: return "open";
  }
  return "open";
}

std::pair<double, double> elementary_interval(const Profile& profile, int p, int q, double rho) {
  const double lo_scan = std::max(profile.rho_min(), 1e-12);
  const auto tori = scan_tori(profile, p, q, lo_scan, profile.rho_max());
  double lo = profile.rho_min(), hi = profile.rho_max();
  for (const auto& t : tori) {
    if (std::abs(t.r - rho) <= 1e-12)
      throw Error(ErrorCode::IntervalNotElementary, "starting radius sits on an orbit torus");
    if (t.r < rho) lo = std::max(lo, t.r);
    if (t.r > rho) hi = std::min(hi, t.r);
  }
  return {lo, hi};
}

std::pair<int, int> sign_convention(const Profile& profile, double lo, double hi, int p, int q) {
  std::tie(p, q) = normalize_slope(p, q);
  if (!(lo < hi)) throw Error(ErrorCode::Domain, "empty interval");
  for (const Segment& seg : profile.segments()) {
    const double a = std::max(lo, seg.lo()), b = std::min(hi, seg.hi());
    if (a >= b) continue;
    const double ua = seg.to_u(a), ub = seg.to_u(b);
    const double ref = std::abs(q) * magnitude(seg.local(Channel::F, 1), ua, ub) +
                       kTwoPi * std::abs(p) * magnitude(seg.local(Channel::G, 1), ua, ub);
    const RootSet rs = real_roots(slope_poly(seg, p, q), ua, ub, ref);
    if (rs.identically_zero || ref == 0.0)
      throw Error(ErrorCode::ContinuumOfTori, "q f' - 2 pi p g' vanishes identically on the interval");
    for (double u : rs.roots) {
      const double r = seg.from_u(u);
      if (r - lo > 1e-12 && hi - r > 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "q f' - 2 pi p g' vanishes at " << r << " inside the interval";
        throw Error(ErrorCode::IntervalNotElementary, os.str());
      }
    }
  }
  const double mid = slope_residual(profile, 0.5 * (lo + hi), p, q);
  if (mid == 0.0) throw Error(ErrorCode::IntervalNotElementary, "slope residual vanishes at the midpoint");
  return mid > 0.0 ? std::pair{p, q} : std::pair{-p, -q};
}

int puncture_sign(const Profile& profile, double r) {
  const double v = -morse_bott_value(profile, r);  // f'g'' - f''g'
  if (std::abs(v) <= kMorseBottThreshold)
    throw Error(ErrorCode::NotMorseBott, "torus is not Morse-Bott: puncture sign undefined");
  return sgn(v);
}

int central_puncture_sign(const Profile& profile, int p, int q, std::optional<double> rho_plus) {
  if (q == 0) throw Error(ErrorCode::Precondition, "central puncture needs q != 0");
  const CentralOrbit c = central_cz(profile, std::abs(q));
  if (c.degenerate)
    throw Error(ErrorCode::DegenerateCover,
                "the |q|-fold cover of the axis orbit is degenerate; see central_cz");
  const Jet j0 = profile.jet(0.0);
  double slope_plus = kTwoPi * p / q;
  if (rho_plus) {
    const Jet jp = profile.jet(*rho_plus);
    slope_plus = jp.f[1] / jp.g[1];
  }
  const int sigma = sgn(slope_plus - j0.f[2] / j0.g[2]);
  const int identity = -sgn(q) * sgn(j0.g[2]);
  if (sigma != identity)
    throw Error(ErrorCode::SignConvention,
                "slope form of the axis puncture sign disagrees with -sgn(q) sgn(g''(0)); "
                "check the sign convention for (p, q)");
  return sigma;
}

int cz_torus_puncture(const Profile& profile, int p, int sigma_plus) {
  const double f0 = profile.eval(0.0, Channel::F, 0);
  if (f0 == 0.0) throw Error(ErrorCode::InvalidProfile, "f(0) = 0");
  return sigma_plus * (1 - 2 * sgn(f0) * p);
}

int cylinder_index(const Profile& profile, int p, int q, int sigma_minus) {
  if (q == 0) throw Error(ErrorCode::Precondition, "cylinder index to the axis needs q != 0");
  if (central_cz(profile, std::abs(q)).degenerate)
    throw Error(ErrorCode::DegenerateCover, "the |q|-fold cover of the axis orbit is degenerate");
  const Jet j0 = profile.jet(0.0);
  const double w = (q * j0.f[2] - kTwoPi * p * j0.g[2]) / (kTwoPi * std::abs(j0.g[2]));
  if (!(w > 0.0))
    throw Error(ErrorCode::SignConvention, "q f''(0) - 2 pi p g''(0) must be positive");
  return sigma_minus > 0 ? 2 + 2 * static_cast<int>(std::floor(w))
                         : 2 * static_cast<int>(std::ceil(w));
}

int fredholm_index(int mu, const CurveTopology& topology) {
  return mu - topology.euler() + topology.boundary;
}

namespace {

struct LeafSetup {
  int p = 0, q = 0;
  double lo = 0.0, hi = 0.0;
  bool plus_torus = false, minus_torus = false, minus_axis = false;
  EndSpec plus_end, minus_end;
};

LeafSetup setup_leaf(const Profile& profile, int p, int q, double rho_start) {
  if (!(rho_start > profile.rho_min() && rho_start < profile.rho_max()))
    throw Error(ErrorCode::Domain, "starting radius must lie inside the profile");
  LeafSetup st;
  std::tie(st.lo, st.hi) = elementary_interval(profile, p, q, rho_start);
  std::tie(st.p, st.q) = sign_convention(profile, st.lo, st.hi, p, q);
  const double lo_scan = std::max(profile.rho_min(), 1e-12);
  const auto tori = scan_tori(profile, st.p, st.q, lo_scan, profile.rho_max());
  st.plus_torus = is_root(tori, st.hi);
  st.minus_torus = st.lo > 0.0 && is_root(tori, st.lo);
  st.minus_axis = st.lo == 0.0 && profile.reaches_axis();
  st.plus_end = {st.hi, st.hi, !st.plus_torus};
  st.minus_end = {st.lo, st.lo, !(st.minus_torus || st.minus_axis)};
  return st;
}

CylinderLeaf assemble_leaf(const Profile& profile, const LeafSetup& st, double rho_start,
                           double a_start, double theta0, double phi0, const HalfLeaf& fwd,
                           const HalfLeaf& bwd) {
  const int p = st.p, q = st.q;
  const double lo = st.lo, hi = st.hi;
  const bool plus_torus = st.plus_torus, minus_torus = st.minus_torus, minus_axis = st.minus_axis;
  const LeafField field{profile, p, q};

  CylinderLeaf leaf;
  leaf.p = p;
  leaf.q = q;
  leaf.theta0 = theta0;
  leaf.phi0 = phi0;
  leaf.rho_minus = lo;
  leaf.rho_plus = hi;

  leaf.samples.reserve(fwd.samples.size() + bwd.samples.size() + 1);
  for (auto it = bwd.samples.rbegin(); it != bwd.samples.rend(); ++it) leaf.samples.push_back(*it);
  leaf.samples.push_back({0.0, a_start, rho_start});
  leaf.samples.insert(leaf.samples.end(), fwd.samples.begin(), fwd.samples.end());

  auto fill_torus = [&](Puncture& pu, double r) {
    pu.target = EndTarget::Torus;
    pu.r = r;
    pu.rate = field.dF(r);
    try {
      pu.sign = puncture_sign(profile, r);
    } catch (const Error& e) {
      pu.sign = 0;
      leaf.certifiable = false;
      leaf.warnings.push_back(e.what());
    }
  };

  leaf.plus.end = +1;
  leaf.plus.resolved = fwd.resolved;
  leaf.plus.gap = fwd.gap;
  if (plus_torus) {
    fill_torus(leaf.plus, hi);
  } else {
    leaf.plus.target = EndTarget::Open;
    leaf.plus.r = hi;
  }

  leaf.minus.end = -1;
  leaf.minus.resolved = bwd.resolved;
  leaf.minus.gap = bwd.gap;
  if (minus_torus) {
    fill_torus(leaf.minus, lo);
  } else if (minus_axis) {
    leaf.minus.r = 0.0;
    leaf.minus.rate = field.dF(0.0);
    if (q == 0) {
      leaf.minus.target = EndTarget::Removable;
      leaf.plane = true;
    } else {
      leaf.minus.target = EndTarget::Central;
      leaf.minus.cover = std::abs(q);
      try {
        leaf.minus.sign = central_puncture_sign(profile, p, q, plus_torus ? std::optional(hi) : std::nullopt);
      } catch (const Error& e) {
        leaf.minus.sign = 0;
        leaf.certifiable = false;
        leaf.warnings.push_back(e.what());
      }
    }
  } else {
    leaf.minus.target = EndTarget::Open;
    leaf.minus.r = lo;
  }

  for (const HalfLeaf* h : {&bwd, &fwd}) {
    if (!h->resolved) {
      std::ostringstream os;
      os.precision(6);
      os << "slow convergence: s_max reached with asymptote gap " << h->gap;
      leaf.warnings.push_back(os.str());
    }
  }

  leaf.topology.punctures = leaf.plane ? 1 : 2;
  const bool open = leaf.plus.target == EndTarget::Open || leaf.minus.target == EndTarget::Open;
  if (!open && leaf.certifiable) {
    if (leaf.minus.target == EndTarget::Torus) {
      // Both ends Morse-Bott tori: each puncture contributes one.
      leaf.index = fredholm_index(2, leaf.topology);
    } else if (leaf.plane) {
      const int sigma_plus = leaf.plus.sign;
      leaf.index = fredholm_index(sigma_plus * cz_torus_puncture(profile, p, sigma_plus), leaf.topology);
    } else {
      try {
        const int idx = cylinder_index(profile, p, q, leaf.minus.sign);
        const auto central = central_cz(profile, std::abs(q));
        const int sum = leaf.plus.sign * cz_torus_puncture(profile, p, leaf.plus.sign) +
                        leaf.minus.sign * central.cz.value_or(0);
        if (sum != idx) leaf.warnings.push_back("index formula cross-check mismatch");
        leaf.index = idx;
      } catch (const Error& e) {
        leaf.certifiable = false;
        leaf.warnings.push_back(e.what());
      }
    }
  }
  return leaf;
}

}  // namespace


CylinderLeaf integrate_cylinder(const Profile& profile, int p, int q, double rho_start,
                                double a_start, double theta0, double phi0,
                                const IntegrationOptions& opts) {
  const LeafSetup st = setup_leaf(profile, p, q, rho_start);
  const LeafField field{profile, st.p, st.q};
  const HalfLeaf fwd = integrate_half(field, rho_start, a_start, +1, st.plus_end, opts);
  const HalfLeaf bwd = integrate_half(field, rho_start, a_start, -1, st.minus_end, opts);
  return assemble_leaf(profile, st, rho_start, a_start, theta0, phi0, fwd, bwd);
}

CylinderLeaf reintegrate_below(const Profile& profile, const CylinderLeaf& leaf, double s_match,
                               const IntegrationOptions& opts) {
  if (leaf.samples.empty()) throw Error(ErrorCode::Precondition, "leaf has no samples");
  std::size_t k = 0;
  for (std::size_t i = 1; i < leaf.samples.size(); ++i)
    if (std::abs(leaf.samples[i].s - s_match) < std::abs(leaf.samples[k].s - s_match)) k = i;
  const LeafSample m = leaf.samples[k];
  const LeafSetup st = setup_leaf(profile, leaf.p, leaf.q, m.rho);
  if (st.p != leaf.p || st.q != leaf.q)
    throw Error(ErrorCode::Matching, "signed type of the leaf changes under the new profile");
  const LeafField field{profile, st.p, st.q};

  HalfLeaf fwd;
  for (std::size_t i = k + 1; i < leaf.samples.size(); ++i) {
    LeafSample x = leaf.samples[i];
    x.s -= m.s;
    fwd.samples.push_back(x);
  }
  fwd.resolved = leaf.plus.resolved;
  fwd.gap = leaf.plus.gap;

  std::vector<double> stops;
  for (std::size_t i = k; i-- > 0;) stops.push_back(leaf.samples[i].s - m.s);
  const HalfLeaf bwd = integrate_half(field, m.rho, m.a, -1, st.minus_end, opts, stops);

  CylinderLeaf out = assemble_leaf(profile, st, m.rho, m.a, leaf.theta0, leaf.phi0, fwd, bwd);
  for (auto& x : out.samples) x.s += m.s;
  // Samples from the match point upward are the input's, bit for bit.
  const std::size_t keep = leaf.samples.size() - k;
  std::copy(leaf.samples.begin() + static_cast<std::ptrdiff_t>(k), leaf.samples.end(),
            out.samples.end() - static_cast<std::ptrdiff_t>(keep));
  return out;
}

double cr_residual(const CylinderLeaf& leaf, const Profile& profile) {
  const auto& sm = leaf.samples;
  const std::size_t n = sm.size();
  if (n < 5) return 0.0;
  const LeafField field{profile, leaf.p, leaf.q};
  std::vector<std::size_t> seg(n);
  for (std::size_t i = 0; i < n; ++i) seg[i] = profile.segment_index(sm[i].rho);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Prefer the most central window of five whose samples share a profile
    // segment with sample i: the profile is only C^3 across breakpoints.
    const std::size_t first = i >= 4 ? i - 4 : 0, last = std::min(i, n - 5);
    std::size_t start = std::min(i >= 2 ? i - 2 : 0, n - 5);
    std::size_t best_off = n;
    for (std::size_t w = first; w <= last; ++w) {
      bool same = true;
      for (std::size_t k = w; k < w + 5 && same; ++k) same = seg[k] == seg[i];
      const std::size_t off = w + 2 > i ? w + 2 - i : i - w - 2;
      if (same && off < best_off) {
        best_off = off;
        start = w;
      }
    }
    std::array<double, 5> xs{};
    for (int k = 0; k < 5; ++k) xs[k] = sm[start + k].s;
    const auto w = fd_weights(sm[i].s, xs);
    double da = 0.0, drho = 0.0;
    for (int k = 0; k < 5; ++k) {
      da += w[k] * sm[start + k].a;
      drho += w[k] * sm[start + k].rho;
    }
    // a_t and rho_t vanish identically under the ansatz.
    worst = std::max(worst, std::abs(da - field.A(sm[i].rho)));
    worst = std::max(worst, std::abs(drho - field.F(sm[i].rho)));
  }
  return worst;
}

EnergyReport dlambda_energy(const CylinderLeaf& leaf, const Profile& profile, bool allow_truncated) {
  if (!allow_truncated && !(leaf.minus.resolved && leaf.plus.resolved))
    throw Error(ErrorCode::SlowConvergence, "leaf has an unresolved asymptote");
  const LeafField field{profile, leaf.p, leaf.q};
  EnergyReport rep;
  const auto& sm = leaf.samples;
  for (std::size_t i = 0; i + 1 < sm.size(); ++i) {
    const double h = sm[i + 1].s - sm[i].s;
    const auto y0 = field.density(sm[i].rho), y1 = field.density(sm[i + 1].rho);
    rep.numeric += 0.5 * h * (y0[0] + y1[0]) + h * h / 12.0 * (y0[1] - y1[1]);
  }
  auto end_radius = [&](const Puncture& pu, double sampled) {
    return pu.resolved && pu.target != EndTarget::Open ? pu.r : sampled;
  };
  const double r_plus = end_radius(leaf.plus, sm.back().rho);
  const double r_minus = end_radius(leaf.minus, sm.front().rho);
  rep.boundary_term = field.A(r_plus) - field.A(r_minus);
  // The tail is measured to the limiting orbit even when the leaf was clipped.
  auto limit_radius = [&](const Puncture& pu, double sampled) {
    return pu.target != EndTarget::Open ? pu.r : sampled;
  };
  rep.tail = std::abs(field.A(limit_radius(leaf.plus, sm.back().rho)) - field.A(sm.back().rho)) +
             std::abs(field.A(sm.front().rho) - field.A(limit_radius(leaf.minus, sm.front().rho)));
  if (leaf.plus.target == EndTarget::Torus)
    rep.period_plus = torus_period(profile, leaf.plus.r, leaf.p, leaf.q);
  if (leaf.minus.target == EndTarget::Torus)
    rep.period_minus = torus_period(profile, leaf.minus.r, leaf.p, leaf.q);
  else if (leaf.minus.target == EndTarget::Central)
    rep.period_minus = std::abs(leaf.q) * std::abs(profile.eval(0.0, Channel::F, 0));
  else if (leaf.minus.target == EndTarget::Removable)
    rep.period_minus = 0.0;
  return rep;
}

CylinderLeaf truncate_leaf(const CylinderLeaf& leaf, double s_lo, double s_hi) {
  CylinderLeaf out = leaf;
  out.samples.clear();
  for (const auto& x : leaf.samples)
    if (x.s >= s_lo && x.s <= s_hi) out.samples.push_back(x);
  if (out.samples.empty()) throw Error(ErrorCode::Domain, "truncation window contains no samples");
  if (out.samples.front().s > leaf.samples.front().s) {
    out.minus.resolved = false;
    out.minus.gap = std::abs(out.samples.front().rho - leaf.minus.r);
  }
  if (out.samples.back().s < leaf.samples.back().s) {
    out.plus.resolved = false;
    out.plus.gap = std::abs(out.samples.back().rho - leaf.plus.r);
  }
  return out;
}

double plane_tail_bound(const CylinderLeaf& leaf, const Profile& profile) {
  if (!leaf.plane) throw Error(ErrorCode::Precondition, "tail bound applies to planes");
  const LeafField field{profile, leaf.p, leaf.q};
  const double r0 = leaf.samples.front().rho;
  double rate_min = HUGE_VAL, growth = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double r = r0 * i / 200.0;
    rate_min = std::min(rate_min, field.F(r) / r);
    growth = std::max(growth, std::abs(profile.eval(r, Channel::G, 0)) / (r * r));
  }
  if (!(rate_min > 0.0)) return HUGE_VAL;
  // |a'| = 2 pi |p| |g| <= 2 pi |p| M rho^2 with rho <= r0 exp(rate (s - s0)).
  return kTwoPi * std::abs(leaf.p) * growth * r0 * r0 / (2.0 * rate_min);
}

double total_variation_below(const CylinderLeaf& leaf, double s_cut) {
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < leaf.samples.size(); ++i) {
    if (leaf.samples[i + 1].s >= s_cut) break;
    tv += std::abs(leaf.samples[i + 1].a - leaf.samples[i].a);
  }
  return tv;
}

}  // namespace reebfol
