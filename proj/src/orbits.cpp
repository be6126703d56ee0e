#include "reebfol/orbits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <tuple>

#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

#include "reebfol/error.hpp"

namespace reebfol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_axis(const Profile& profile) {
  if (!profile.reaches_axis())
    throw Error(ErrorCode::InvalidProfile, "profile does not reach the axis");
  const double f0 = profile.eval(0.0, Channel::F, 0);
  if (f0 == 0.0) throw Error(ErrorCode::InvalidProfile, "f(0) = 0: not a contact profile at the axis");
}

double frac_distance(double x) { return std::abs(x - std::round(x)); }

}  // namespace

std::pair<int, int> normalize_slope(int p, int q) {
  if (p == 0 && q == 0) throw Error(ErrorCode::Input, "(p, q) = (0, 0) is not a slope");
  const int d = std::gcd(p, q);
  return {p / d, q / d};
}

double slope_residual(const Profile& profile, double rho, int p, int q) {
  const Jet j = profile.jet(rho);
  return q * j.f[1] - kTwoPi * p * j.g[1];
}

std::vector<OrbitTorus> scan_tori(const Profile& profile, int p, int q, double lo, double hi) {
  std::tie(p, q) = normalize_slope(p, q);
  if (!(lo > 0.0 && lo < hi && hi <= profile.rho_max() && lo >= profile.rho_min()))
    throw Error(ErrorCode::Domain, "scan interval must satisfy 0 < lo < hi <= rho_max");
  std::vector<double> radii;
  for (const Segment& seg : profile.segments()) {
    const double a = std::max(lo, seg.lo()), b = std::min(hi, seg.hi());
    if (a > b) continue;
    const Coeffs poly = slope_poly(seg, p, q);
    const double ua = seg.to_u(a), ub = seg.to_u(b);
    const double ref = std::abs(q) * magnitude(seg.local(Channel::F, 1), ua, ub) +
                       kTwoPi * std::abs(p) * magnitude(seg.local(Channel::G, 1), ua, ub);
    const RootSet rs = real_roots(poly, ua, ub, ref);
    if (rs.identically_zero || ref == 0.0)
      throw Error(ErrorCode::ContinuumOfTori,
                  "q f' - 2 pi p g' vanishes identically on [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
    for (double u : rs.roots) radii.push_back(std::clamp(seg.from_u(u), a, b));
  }
  std::sort(radii.begin(), radii.end());
  std::vector<OrbitTorus> out;
  for (double r : radii) {
    if (!out.empty() && r - out.back().r <= 1e-12) continue;
    OrbitTorus t;
    t.r = r;
    const Jet j = profile.jet(r);
    const bool use_g = std::abs(j.g[1]) >= std::abs(j.f[1]);
    const double den = use_g ? j.g[1] : j.f[1];
    const int num = use_g ? q : p;
    const int flip = (num == 0 || (num > 0) == (den > 0)) ? 1 : -1;
    t.p = flip * p;
    t.q = flip * q;
    t.T = torus_period(profile, r, t.p, t.q);
    t.morse_bott = is_morse_bott(profile, r);
    out.push_back(t);
  }
  return out;
}

double torus_period(const Profile& profile, double r, int p, int q) {
  const Jet j = profile.jet(r);
  const double d = j.f[0] * j.g[1] - j.f[1] * j.g[0];
  // First and second derivative terms, so that a q = 0 root still has a scale.
  const double scale = std::abs(q) * (std::abs(j.f[1]) + std::abs(j.f[2])) +
                       kTwoPi * std::abs(p) * (std::abs(j.g[1]) + std::abs(j.g[2]));
  if (std::abs(q * j.f[1] - kTwoPi * p * j.g[1]) > 1e-6 * std::max(scale, 1e-300))
    throw Error(ErrorCode::Precondition, "radius is not an orbit torus for this slope");
  const double tiny = 1e-14;
  if (std::abs(j.g[1]) <= tiny && std::abs(j.f[1]) <= tiny)
    throw Error(ErrorCode::DegenerateSlope, "f' and g' both vanish at r");
  const double T = std::abs(j.g[1]) >= std::abs(j.f[1]) ? q * d / j.g[1] : kTwoPi * p * d / j.f[1];
  return std::abs(T);
}

double morse_bott_value(const Profile& profile, double r) {
  const Jet j = profile.jet(r);
  return j.f[2] * j.g[1] - j.f[1] * j.g[2];
}

bool is_morse_bott(const Profile& profile, double r) {
  return std::abs(morse_bott_value(profile, r)) > kMorseBottThreshold;
}

CentralOrbit central_cz(const Profile& profile, int k) {
  if (k < 1) throw Error(ErrorCode::Input, "cover multiplicity must be >= 1");
  require_axis(profile);
  const Jet j = profile.jet(0.0);
  if (!(j.f[0] * j.g[2] > 0.0))
    throw Error(ErrorCode::InvalidProfile, "f(0) g''(0) <= 0: not a contact profile at the axis");
  CentralOrbit c;
  c.period = std::abs(j.f[0]);
  c.k = k;
  c.rotation = k * j.f[2] / (kTwoPi * j.g[2]);
  const double dist = frac_distance(c.rotation);
  c.degenerate = dist <= kDegeneracyTolerance;
  c.borderline = !c.degenerate && dist <= kBorderlineBand;
  if (!c.degenerate) c.cz = 2 * static_cast<int>(std::floor(-c.rotation)) + 1;
  return c;
}

WindingResult winding_oracle(const Profile& profile, int k) {
  if (k < 1) throw Error(ErrorCode::Input, "cover multiplicity must be >= 1");
  require_axis(profile);
  // Reeb rates from lambda(X) = 1, d lambda(X, .) = 0 at a small radius.
  auto rates = [&](double rho) {
    const Jet j = profile.jet(rho);
    const double det = j.f[0] * j.g[1] - j.g[0] * j.f[1];
    return std::array<double, 2>{j.g[1] / det, -j.f[1] / det};
  };
  const double h = 1e-4;
  const auto r1 = rates(h), r2 = rates(2.0 * h);
  const double theta_rate = (4.0 * r1[0] - r2[0]) / 3.0;
  const double omega = (4.0 * r1[1] - r2[1]) / 3.0;
  const double period = k / std::abs(theta_rate);

  using State = std::array<double, 2>;
  boost::numeric::odeint::runge_kutta4<State> stepper;
  State v{1.0, 0.0};
  const int steps = 2000 * k;
  const double dt = period / steps;
  double angle = 0.0, prev = 0.0;
  auto rot = [omega](const State& x, State& dx, double) {
    dx[0] = -omega * x[1];
    dx[1] = omega * x[0];
  };
  for (int i = 0; i < steps; ++i) {
    stepper.do_step(rot, v, i * dt, dt);
    const double now = std::atan2(v[1], v[0]);
    double inc = now - prev;
    while (inc > std::numbers::pi) inc -= kTwoPi;
    while (inc < -std::numbers::pi) inc += kTwoPi;
    angle += inc;
    prev = now;
  }
  const double orientation = profile.eval(h, Channel::G, 1) / h > 0.0 ? 1.0 : -1.0;
  WindingResult w;
  w.winding = orientation * angle / kTwoPi;
  w.degenerate = frac_distance(w.winding) <= 1e-6;
  if (!w.degenerate) w.cz = 2 * static_cast<int>(std::floor(w.winding)) + 1;
  return w;
}

double reeb_return_time(const Profile& profile, double r, int p, int q) {
  std::tie(p, q) = normalize_slope(p, q);
  const ReebField x0 = reeb_field(profile, r);
  const std::array<double, 2> target{static_cast<double>(q), -kTwoPi * p};
  // The driving coordinate is the one with the larger displacement in turns.
  const int drive = std::abs(q) >= std::abs(p) ? 0 : 1;
  const double drive_rate = drive == 0 ? x0.theta : x0.phi;
  double expected = std::numeric_limits<double>::infinity();
  if (drive_rate != 0.0) expected = std::abs(target[drive] / drive_rate);
  if (!std::isfinite(expected))
    throw Error(ErrorCode::NonClosing, "Reeb flow never advances in the driving direction");
  const double sign = (target[drive] > 0.0) == (drive_rate > 0.0) ? 1.0 : -1.0;

  using State = std::array<double, 3>;
  auto rhs = [&profile](const State& s, State& ds, double) {
    const ReebField x = reeb_field(profile, s[2]);
    ds = {x.theta, x.phi, 0.0};
  };
  boost::numeric::odeint::runge_kutta4<State> stepper;
  State s{0.0, 0.0, r};
  const int per_period = 1000;
  const double dt = expected / per_period;
  const double horizon = 1e3 * expected;
  int j = 1;
  for (long i = 0; i * dt < horizon; ++i) {
    const State before = s;
    stepper.do_step(rhs, s, i * dt, dt);
    const double goal = sign * j * target[drive];
    const double b = before[drive] - goal, a = s[drive] - goal;
    if (b == 0.0 || (b < 0.0) != (a < 0.0)) {
      const double frac = b == 0.0 ? 0.0 : b / (b - a);
      const double t = (i + frac) * dt;
      const int other = 1 - drive;
      const double value = before[other] + frac * (s[other] - before[other]);
      if (std::abs(value - sign * j * target[other]) < 1e-8) return t;
      ++j;
    }
  }
  throw Error(ErrorCode::NonClosing, "no return to the starting point within the time horizon");
}

}  // namespace reebfol
