#include "reebfol/curve_builder.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "reebfol/hermite.hpp"

namespace reebfol {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 30>;

double dpoly(const Coeffs& c, int order, double x) { return horner(derivative(c, order), x); }

Complex unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

PlaneJet plane_jet(const Profile& profile, double rho) {
  const Jet j = profile.jet(rho);
  PlaneJet p;
  for (int k = 0; k < 4; ++k) p.d[k] = {j.f[k], j.g[k]};
  return p;
}

std::optional<InnerCurve> InnerCurve::build(const PlaneJet& at_delta, const InnerCurveParams& par) {
  const double d = par.delta;
  const Complex p1 = at_delta.d[1], p2 = at_delta.d[2], p3 = at_delta.d[3];
  const double s = std::abs(p1);
  if (!(s > 0.0) || !(d > 0.0)) return std::nullopt;
  const Complex e = p1 / s, n = e * Complex(0.0, 1.0);
  auto dot = [](Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); };
  const double s1 = dot(p2, e);
  const double w1 = dot(p2, n) / s;
  const double s2 = dot(p3, e) + s * w1 * w1;
  const double w2 = (dot(p3, n) - 2.0 * s1 * w1) / s;

  InnerCurve c;
  c.delta_ = d;
  c.end_ = at_delta.d[0];

  // psi(x) = psi0 + chi1 d^2 x^2 + X2 x^4 + X3 x^6 + X4 x^8.
  {
    const double base2 = par.chi1 * d * d;
    Eigen::Matrix3d m;
    Eigen::Vector3d rhs;
    for (int k = 0; k < 3; ++k) {
      const int pw = 4 + 2 * k;
      m(0, k) = 1.0;
      m(1, k) = pw;
      m(2, k) = pw * (pw - 1.0);
    }
    rhs << par.psi_delta - par.psi0 - base2, w1 * d - 2.0 * base2, w2 * d * d - 2.0 * base2;
    const Eigen::Vector3d x = m.fullPivLu().solve(rhs);
    c.psi_x_ = {par.psi0, 0.0, base2, 0.0, x(0), 0.0, x(1), 0.0, x(2)};
  }

  // S(x) = sum_i s_i x^{2i+1}, i = 0..4.
  {
    Eigen::Matrix<double, 5, 5> m;
    Eigen::Matrix<double, 5, 1> rhs;
    for (int i = 0; i < 5; ++i) {
      const double pw = 2.0 * i + 1.0;
      m(0, i) = 1.0;
      m(1, i) = pw;
      m(2, i) = pw * (pw - 1.0);
      auto moment = [&](bool imag) {
        double acc = 0.0;
        for (int piece = 0; piece < 4; ++piece) {
          acc += Gauss::integrate(
              [&](double x) {
                const double ang = horner(c.psi_x_, x);
                return std::pow(x, pw) * (imag ? std::sin(ang) : std::cos(ang));
              },
              0.25 * piece, 0.25 * (piece + 1));
        }
        return d * acc;
      };
      m(3, i) = moment(false);
      m(4, i) = moment(true);
    }
    const Complex target = at_delta.d[0] - Complex(par.f0, 0.0);
    rhs << s, s1 * d, s2 * d * d, target.real(), target.imag();
    const Eigen::Matrix<double, 5, 1> x = m.fullPivLu().solve(rhs);
    if (!((m * x - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()))) return std::nullopt;
    c.s_x_.assign(10, 0.0);
    for (int i = 0; i < 5; ++i) c.s_x_[2 * i + 1] = x(i);
  }

  // S / x must stay positive on [0, 1].
  const Coeffs quotient(c.s_x_.begin() + 1, c.s_x_.end());
  if (!(quotient[0] > 0.0)) return std::nullopt;
  const RootSet rs = real_roots(quotient, 0.0, 1.0);
  if (rs.identically_zero || !rs.roots.empty()) return std::nullopt;
  return c;
}

double InnerCurve::speed(double t) const { return horner(s_x_, t / delta_); }
double InnerCurve::angle(double t) const { return horner(psi_x_, t / delta_); }

double InnerCurve::min_turning_rate() const {
  const Coeffs dpsi = derivative(psi_x_);
  double lo = HUGE_VAL;
  for (int i = 1; i <= 400; ++i) {
    const double x = i / 400.0;
    lo = std::min(lo, horner(dpsi, x) / x);
  }
  return lo;
}

PlaneJet InnerCurve::at(double t) const {
  const double d = delta_;
  const double x = t / d;
  PlaneJet out;
  double re = 0.0, im = 0.0;
  if (x < 1.0) {
    const int pieces = 4;
    for (int piece = 0; piece < pieces; ++piece) {
      const double a = x + (1.0 - x) * piece / pieces, b = x + (1.0 - x) * (piece + 1) / pieces;
      re += Gauss::integrate([&](double y) { return horner(s_x_, y) * std::cos(horner(psi_x_, y)); }, a, b);
      im += Gauss::integrate([&](double y) { return horner(s_x_, y) * std::sin(horner(psi_x_, y)); }, a, b);
    }
  }
  out.d[0] = end_ - d * Complex(re, im);
  // Derivatives in t: d/dt = (1/d) d/dx.
  const double sv = horner(s_x_, x);
  const double sd1 = dpoly(s_x_, 1, x) / d, sd2 = dpoly(s_x_, 2, x) / (d * d);
  const double w = dpoly(psi_x_, 1, x) / d, w1 = dpoly(psi_x_, 2, x) / (d * d);
  const Complex e = unit(horner(psi_x_, x));
  out.d[1] = sv * e;
  out.d[2] = Complex(sd1, sv * w) * e;
  out.d[3] = Complex(sd2 - sv * w * w, 2.0 * sd1 * w + sv * w1) * e;
  return out;
}

namespace {

/// v(x) = v0 + sum_k c_k x^{2k}, k = 1..4, with the 3-jet (in t) at x = 1.
std::optional<Coeffs> even_end_fit(double v0, const std::array<double, 4>& jet, double d) {
  Eigen::Matrix4d m;
  Eigen::Vector4d rhs;
  for (int o = 0; o < 4; ++o) rhs(o) = jet[o] * std::pow(d, o);
  rhs(0) -= v0;
  for (int k = 1; k <= 4; ++k) {
    const int pw = 2 * k;
    double c = 1.0;
    for (int o = 0; o < 4; ++o) {
      m(o, k - 1) = c;
      c *= pw - o;
    }
  }
  const Eigen::Vector4d x = m.fullPivLu().solve(rhs);
  if (!((m * x - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()))) return std::nullopt;
  Coeffs out(9, 0.0);
  out[0] = v0;
  for (int k = 1; k <= 4; ++k) out[2 * k] = x(k - 1);
  return out;
}

template <class Curve>
std::vector<SegmentData> spline_any(const Curve& curve, const SplineLayout& layout,
                                    const PlaneJet& outer_at_delta, const Coeffs& beta);

}  // namespace

std::optional<PolarCurve> PolarCurve::build(const PlaneJet& at_delta, const PolarCurveParams& par) {
  const double d = par.delta;
  const Complex p0 = at_delta.d[0];
  if (!(d > 0.0) || !(par.r0 > 0.0) || std::abs(p0) == 0.0) return std::nullopt;
  // Derivatives of log P = ln r + i alpha.
  const Complex z1 = at_delta.d[1] / p0;
  const Complex z2 = at_delta.d[2] / p0 - z1 * z1;
  const Complex z3 = at_delta.d[3] / p0 - 3.0 * z1 * at_delta.d[2] / p0 + 2.0 * z1 * z1 * z1;
  const double r = std::abs(p0);
  const double l1 = z1.real(), l2 = z2.real(), l3 = z3.real();
  const std::array<double, 4> rj{r, r * l1, r * (l2 + l1 * l1), r * (l3 + 3.0 * l1 * l2 + l1 * l1 * l1)};
  const std::array<double, 4> aj{par.alpha_delta, z1.imag(), z2.imag(), z3.imag()};
  const auto rc = even_end_fit(par.r0, rj, d);
  const auto ac = even_end_fit(par.alpha0, aj, d);
  if (!rc || !ac || !((*ac)[2] > 0.0)) return std::nullopt;
  PolarCurve c;
  c.delta_ = d;
  c.r_x_ = *rc;
  c.alpha_x_ = *ac;
  const Coeffs rate = derivative(c.alpha_x_);
  const Coeffs rate_over_x(rate.begin() + 1, rate.end());
  if (!real_roots(rate_over_x, 0.0, 1.0).roots.empty() || !real_roots(c.r_x_, 0.0, 1.0).roots.empty())
    return std::nullopt;
  return c;
}

double PolarCurve::radius(double t) const { return horner(r_x_, t / delta_); }
double PolarCurve::angle(double t) const { return horner(alpha_x_, t / delta_); }

PlaneJet PolarCurve::at(double t) const {
  const double d = delta_, x = t / d;
  const double r = horner(r_x_, x), r1 = dpoly(r_x_, 1, x) / d, r2 = dpoly(r_x_, 2, x) / (d * d),
               r3 = dpoly(r_x_, 3, x) / (d * d * d);
  const double a1 = dpoly(alpha_x_, 1, x) / d, a2 = dpoly(alpha_x_, 2, x) / (d * d),
               a3 = dpoly(alpha_x_, 3, x) / (d * d * d);
  const Complex e = unit(horner(alpha_x_, x));
  PlaneJet out;
  out.d[0] = r * e;
  out.d[1] = Complex(r1, r * a1) * e;
  out.d[2] = Complex(r2 - r * a1 * a1, 2.0 * r1 * a1 + r * a2) * e;
  out.d[3] = Complex(r3 - 3.0 * r1 * a1 * a1 - 3.0 * r * a1 * a2,
                     3.0 * r2 * a1 + 3.0 * r1 * a2 + r * a3 - r * a1 * a1 * a1) * e;
  return out;
}

std::vector<SegmentData> spline_inner_curve(const InnerCurve& curve, const SplineLayout& layout,
                                            const PlaneJet& outer_at_delta, const Coeffs& beta) {
  return spline_any(curve, layout, outer_at_delta, beta);
}

std::vector<SegmentData> spline_inner_curve(const PolarCurve& curve, const SplineLayout& layout,
                                            const PlaneJet& outer_at_delta, const Coeffs& beta) {
  return spline_any(curve, layout, outer_at_delta, beta);
}

namespace {

template <class Curve>
std::vector<SegmentData> spline_any(const Curve& curve, const SplineLayout& layout,
                                    const PlaneJet& outer_at_delta, const Coeffs& beta) {
  const double d = curve.delta();
  const double t1 = layout.t1_fraction * d;
  auto split = [](const PlaneJet& j, bool imag) {
    Jet4 out{};
    for (int k = 0; k < 4; ++k) out[k] = imag ? j.d[k].imag() : j.d[k].real();
    return out;
  };
  std::vector<double> knots{t1};
  for (int i = 1; i <= layout.septic_pieces; ++i)
    knots.push_back(t1 + (d - t1) * static_cast<double>(i) / layout.septic_pieces);
  knots.back() = d;

  std::vector<PlaneJet> jets;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) jets.push_back(curve.at(knots[i]));
  jets.push_back(outer_at_delta);

  std::vector<SegmentData> segs;
  const double f0 = curve.at(0.0).d[0].real();
  segs.push_back({0.0, t1, even_axis_fit(t1, f0, split(jets[0], false)),
                  even_axis_fit(t1, 0.0, split(jets[0], true)), beta});
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    segs.push_back({a, b, septic_hermite(a, b, split(jets[i], false), split(jets[i + 1], false)),
                    septic_hermite(a, b, split(jets[i], true), split(jets[i + 1], true)), beta});
  }
  return segs;
}

}  // namespace

}  // namespace reebfol
