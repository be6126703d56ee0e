#include "reebfol/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "reebfol/error.hpp"
#include "reebfol/kernels.hpp"

namespace reebfol {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Structural: return "structural";
    case ErrorCode::InvalidProfile: return "invalid_profile";
    case ErrorCode::ContinuumOfTori: return "continuum_of_tori";
    case ErrorCode::DegenerateSlope: return "degenerate_slope";
    case ErrorCode::NonClosing: return "non_closing";
    case ErrorCode::DegenerateWithinTolerance: return "degenerate_within_tolerance";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::Construction: return "construction";
    case ErrorCode::Matrix: return "matrix";
    case ErrorCode::Input: return "input";
    case ErrorCode::IntervalNotElementary: return "interval_not_elementary";
    case ErrorCode::NotMorseBott: return "not_morse_bott";
    case ErrorCode::DegenerateCover: return "degenerate_cover";
    case ErrorCode::SignConvention: return "sign_convention";
    case ErrorCode::SlowConvergence: return "slow_convergence";
    case ErrorCode::Matching: return "matching";
  }
  return "unknown";
}

namespace {

const char* channel_name(Channel ch) {
  switch (ch) {
    case Channel::F: return "f";
    case Channel::G: return "g";
    case Channel::Beta: return "beta";
  }
  return "?";
}

[[noreturn]] void structural(const std::string& msg) { throw Error(ErrorCode::Structural, msg); }

bool tiny(double c, double scale) { return std::abs(c) <= 1e-12 * std::max(1.0, scale); }

double max_abs(const Coeffs& c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

// Sum of |c_j| j!/(j-k)! |x|^(j-k): the size of the terms that make up the
// k-th derivative of a global-basis polynomial at x.
double derivative_magnitude(const Coeffs& c, int k, double x) {
  double m = 0.0;
  for (std::size_t j = static_cast<std::size_t>(k); j < c.size(); ++j) {
    double term = std::abs(c[j]);
    for (int i = 0; i < k; ++i) term *= static_cast<double>(j - i);
    m += term * std::pow(std::abs(x), static_cast<double>(j - k));
  }
  return m;
}

}  // namespace

Segment::Segment(SegmentData data) : data_(std::move(data)) {
  if (data_.lo == 0.0) {
    center_ = 0.0;
    scale_ = data_.hi;
  } else {
    center_ = 0.5 * (data_.lo + data_.hi);
    scale_ = 0.5 * (data_.hi - data_.lo);
  }
  for (int ch = 0; ch < 3; ++ch) {
    const Coeffs& g = global(static_cast<Channel>(ch));
    Coeffs loc = to_local(g, center_, scale_);
    double inv = 1.0;
    for (int k = 0; k < 4; ++k) {
      local_[ch][k] = scaled(loc, inv);
      loc = derivative(loc);
      inv /= scale_;
    }
  }
}

const Coeffs& Segment::global(Channel ch) const {
  switch (ch) {
    case Channel::F: return data_.f;
    case Channel::G: return data_.g;
    case Channel::Beta: return data_.beta;
  }
  return data_.f;
}

double Segment::eval(Channel ch, int order, double rho) const {
  return horner(local(ch, order), to_u(rho));
}

Profile::Profile(std::vector<SegmentData> segments) {
  if (segments.empty()) structural("profile has no segments");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    SegmentData& s = segments[i];
    if (!(s.hi > s.lo) || s.lo < 0.0 || !std::isfinite(s.hi))
      structural("segment " + std::to_string(i) + " has an empty or negative interval");
    for (Coeffs* c : {&s.f, &s.g, &s.beta}) {
      if (c->empty()) c->push_back(0.0);
      if (c->size() > static_cast<std::size_t>(kMaxSegmentDegree + 1))
        structural("segment " + std::to_string(i) + " exceeds degree 9");
      for (double v : *c)
        if (!std::isfinite(v)) structural("segment " + std::to_string(i) + " has a non-finite coefficient");
    }
    if (i > 0) {
      const double gap = s.lo - segments[i - 1].hi;
      if (std::abs(gap) > 1e-12 * std::max(1.0, s.lo))
        structural("segments " + std::to_string(i - 1) + " and " + std::to_string(i) +
                   " leave a gap or overlap");
      s.lo = segments[i - 1].hi;
    }
  }
  segments_.reserve(segments.size());
  for (auto& s : segments) segments_.emplace_back(std::move(s));

  for (std::size_t i = 1; i < segments_.size(); ++i) {
    const Segment& left = segments_[i - 1];
    const Segment& right = segments_[i];
    const double b = right.lo();
    for (Channel ch : {Channel::F, Channel::G, Channel::Beta}) {
      for (int k = 0; k <= 3; ++k) {
        const double vl = left.eval(ch, k, b);
        const double vr = right.eval(ch, k, b);
        const double rounding = kBreakpointRounding * std::max(derivative_magnitude(left.global(ch), k, b),
                                                               derivative_magnitude(right.global(ch), k, b));
        const double tol = std::max(kBreakpointTolerance * std::max(1.0, std::abs(vl)), rounding);
        if (std::abs(vl - vr) > tol) {
          std::ostringstream os;
          os.precision(17);
          os << "breakpoint " << b << ": " << channel_name(ch) << " derivative " << k
             << " mismatch " << vl << " vs " << vr;
          structural(os.str());
        }
      }
    }
  }

  const Segment& first = segments_.front();
  if (first.touches_axis()) {
    const Coeffs& f = first.global(Channel::F);
    const Coeffs& g = first.global(Channel::G);
    const Coeffs& beta = first.global(Channel::Beta);
    const double sf = max_abs(f), sg = max_abs(g), sb = max_abs(beta);
    for (std::size_t k = 1; k < f.size(); k += 2)
      if (!tiny(f[k], sf)) structural("axis segment: f must contain only even powers");
    for (std::size_t k = 0; k < g.size(); ++k) {
      if ((k < 2 || k % 2 == 1) && !tiny(g[k], sg))
        structural("axis segment: g must contain only even powers of degree >= 2");
    }
    for (std::size_t k = 1; k < beta.size(); k += 2)
      if (!tiny(beta[k], sb)) structural("axis segment: beta must contain only even powers");
    if (!(beta[0] > 0.0)) structural("axis segment: beta(0) must be positive");
  }
}

std::vector<SegmentData> Profile::segment_data() const {
  std::vector<SegmentData> out;
  out.reserve(segments_.size());
  for (const auto& s : segments_) out.push_back(s.data());
  return out;
}

std::size_t Profile::segment_index(double rho) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), rho,
                             [](double r, const Segment& s) { return r < s.hi(); });
  if (it == segments_.end()) return segments_.size() - 1;
  return static_cast<std::size_t>(it - segments_.begin());
}

double Profile::eval(double rho, Channel ch, int order) const {
  if (!(rho >= rho_min() && rho <= rho_max())) {
    std::ostringstream os;
    os.precision(17);
    os << "radius " << rho << " outside [" << rho_min() << ", " << rho_max() << "]";
    throw Error(ErrorCode::Domain, os.str());
  }
  if (order < 0 || order > 3) throw Error(ErrorCode::Domain, "derivative order must be 0..3");
  return segments_[segment_index(rho)].eval(ch, order, rho);
}

double Profile::eval_unchecked(double rho, Channel ch, int order) const {
  return segments_[segment_index(rho)].eval(ch, order, rho);
}

Jet Profile::jet(double rho) const {
  const Segment& s = segments_[segment_index(rho)];
  const double u = s.to_u(rho);
  Jet j;
  for (int k = 0; k < 4; ++k) {
    j.f[k] = horner(s.local(Channel::F, k), u);
    j.g[k] = horner(s.local(Channel::G, k), u);
    j.beta[k] = horner(s.local(Channel::Beta, k), u);
  }
  return j;
}

double wronskian(const Profile& profile, double rho) {
  const double f = profile.eval(rho, Channel::F, 0);
  const double f1 = profile.eval(rho, Channel::F, 1);
  const double g = profile.eval(rho, Channel::G, 0);
  const double g1 = profile.eval(rho, Channel::G, 1);
  return f * g1 - f1 * g;
}

Coeffs wronskian_poly(const Segment& seg) {
  return subtract(multiply(seg.local(Channel::F, 0), seg.local(Channel::G, 1)),
                  multiply(seg.local(Channel::F, 1), seg.local(Channel::G, 0)));
}

Coeffs acceleration_poly(const Segment& seg) {
  return subtract(multiply(seg.local(Channel::F, 1), seg.local(Channel::G, 2)),
                  multiply(seg.local(Channel::F, 2), seg.local(Channel::G, 1)));
}

Coeffs slope_poly(const Segment& seg, int p, int q) {
  return combine(static_cast<double>(q), seg.local(Channel::F, 1),
                 -2.0 * std::numbers::pi * static_cast<double>(p), seg.local(Channel::G, 1));
}

std::vector<double> positivity_failures(const Segment& seg, const Coeffs& poly_u, double a,
                                        double b, bool open_at_axis) {
  std::vector<double> bad;
  const double ua = seg.to_u(a), ub = seg.to_u(b);
  Coeffs c = poly_u;
  if (open_at_axis && seg.touches_axis() && a == 0.0) c = strip_low_order_zeros(poly_u);
  const RootSet rs = real_roots(c, ua, ub);
  if (rs.identically_zero) {
    bad.push_back(a);
    return bad;
  }
  for (double u : rs.roots) {
    // A root exactly at an open axis endpoint of the stripped quotient still
    // counts: the quotient's value there is the leading-order behaviour.
    bad.push_back(seg.from_u(u));
  }
  if (bad.empty()) {
    const double mid = horner(c, 0.5 * (ua + ub));
    if (!(mid > 0.0)) bad.push_back(seg.from_u(0.5 * (ua + ub)));
  }
  return bad;
}

ContactReport validate_contact(const Profile& profile, const ContactOptions& opts) {
  ContactReport rep;
  if (profile.reaches_axis()) {
    const double d0 = profile.eval(0.0, Channel::F, 0) * profile.eval(0.0, Channel::G, 2);
    rep.d_prime_at_zero = d0;
    if (!(d0 > 0.0)) rep.violations.push_back({std::nullopt, "f(0)g''(0) > 0", d0});
  }
  GridSample minimum;
  const auto grid_bad = wronskian_grid_failures(profile, opts.grid_points, &minimum);
  if (!grid_bad.empty()) {
    // Report the worst sample and the first failure.
    rep.violations.push_back({grid_bad.front().rho, "D > 0 (grid)", grid_bad.front().value});
    if (minimum.rho != grid_bad.front().rho)
      rep.violations.push_back({minimum.rho, "D > 0 (grid minimum)", minimum.value});
  }
  const auto roots = positivity_failures(profile, profile.rho_min(), profile.rho_max(),
                                         [](const Segment& s) { return wronskian_poly(s); });
  for (double r : roots) {
    const double at = std::clamp(r, profile.rho_min(), profile.rho_max());
    rep.violations.push_back({at, "D > 0 (root isolation)", wronskian(profile, at)});
  }
  rep.valid = rep.violations.empty();
  return rep;
}

ReebField reeb_field(const Profile& profile, double rho) {
  const Jet j = profile.jet(rho);
  if (rho < profile.rho_min() || rho > profile.rho_max())
    throw Error(ErrorCode::Domain, "radius outside profile domain");
  if (rho == 0.0) {
    const double dprime = j.f[0] * j.g[2];
    if (!(dprime > 0.0))
      throw Error(ErrorCode::InvalidProfile, "f(0)g''(0) <= 0: not a contact form at the axis");
    return {1.0 / j.f[0], -j.f[2] / dprime};
  }
  const double d = j.f[0] * j.g[1] - j.f[1] * j.g[0];
  if (!(d > 0.0)) throw Error(ErrorCode::InvalidProfile, "Wronskian D <= 0: not a contact form");
  return {j.g[1] / d, -j.f[1] / d};
}

}  // namespace reebfol
