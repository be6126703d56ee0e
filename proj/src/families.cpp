#include "reebfol/families.hpp"

#include <cmath>
#include <numbers>

#include "reebfol/error.hpp"
#include "reebfol/hermite.hpp"

namespace reebfol {

namespace {

constexpr double kPi = std::numbers::pi;

Coeffs chart_beta() {
  // 2 pi sum (2 pi rho^2)^k, k = 0..4.
  Coeffs b(9, 0.0);
  double term = 2.0 * kPi;
  for (int k = 0; k <= 4; ++k) {
    b[2 * k] = term;
    term *= 2.0 * kPi;
  }
  return b;
}

bool near_integer_but_not(double x) {
  const double frac = std::abs(x - std::round(x));
  return frac > 1e-13 && frac < 1e-5;
}

}  // namespace

Profile standard_profile(double rho_max, double c) {
  return Profile({SegmentData{0.0, rho_max, {c}, {0.0, 0.0, c}, {1.0}}});
}

Profile mirrored_standard_profile(double rho_max) {
  return Profile({SegmentData{0.0, rho_max, {1.0}, {0.0, 0.0, -1.0}, {1.0}}});
}

Profile hopf_chart_profile(double rho_max) {
  if (!(rho_max > 0.0 && 2.0 * kPi * rho_max * rho_max < 1.0))
    throw Error(ErrorCode::Precondition, "chart radius must lie in (0, 1/sqrt(2 pi))");
  return Profile({SegmentData{0.0, rho_max, {kPi}, {0.0, 0.0, kPi}, chart_beta()}});
}

Profile stabilized_chart_profile(const StabilizationShape& s) {
  if (!(0.0 < s.t1 && s.t1 < s.delta && s.delta < s.rho_max && 2.0 * kPi * s.rho_max * s.rho_max < 1.0))
    throw Error(ErrorCode::Precondition, "stabilization radii must satisfy 0 < t1 < delta < rho_max < 1/sqrt(2 pi)");
  const double c1 = 0.5 * s.curvature;
  const Coeffs h_axis{1.0, 0.0, c1};
  const Jet4 at_t1 = jet_of(h_axis, s.t1);
  const Coeffs h_mid = septic_hermite(s.t1, s.delta, at_t1, {1.0, 0.0, 0.0, 0.0});
  const Coeffs rho2{0.0, 0.0, 1.0};
  const Coeffs beta = chart_beta();
  auto piece = [&](double lo, double hi, const Coeffs& h) {
    return SegmentData{lo, hi, scaled(h, kPi), scaled(multiply(rho2, h), kPi), beta};
  };
  return Profile({piece(0.0, s.t1, h_axis), piece(s.t1, s.delta, h_mid),
                  piece(s.delta, s.rho_max, {1.0})});
}

Profile random_contact_profile(std::mt19937_64& rng, const RandomProfileOptions& opts) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> small_den(1, 3);
  std::uniform_int_distribution<int> small_num(-2, 2);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double sign = coin(rng) < 0.5 ? -1.0 : 1.0;
    const double a0 = sign * mag(rng);
    const double b2 = sign * mag(rng);
    double a2 = unit(rng) * 3.0;
    if (coin(rng) < opts.degenerate_fraction) a2 = kPi * b2 * small_num(rng) / small_den(rng);
    const double a4 = 0.3 * unit(rng);
    const double b4 = 0.3 * unit(rng);
    const double c0 = mag(rng);
    const double c2 = 0.2 * unit(rng);

    bool borderline = false;
    for (int k = 1; k <= 5; ++k)
      borderline = borderline || near_integer_but_not(k * a2 / (kPi * b2));
    if (borderline) continue;

    const Coeffs f{a0, 0.0, a2, 0.0, a4};
    const Coeffs g{0.0, 0.0, b2, 0.0, b4};
    const Coeffs beta{c0, 0.0, c2};
    std::vector<SegmentData> segs;
    if (opts.two_segments) {
      const double b = 0.5 * opts.rho_max, e = opts.rho_max;
      segs.push_back({0.0, b, f, g, beta});
      auto perturbed = [&](const Coeffs& c) {
        Jet4 j = jet_of(c, e);
        for (double& v : j) v += 0.05 * unit(rng) * (1.0 + std::abs(v));
        return septic_hermite(b, e, jet_of(c, b), j);
      };
      const Coeffs f2 = perturbed(f), g2 = perturbed(g);
      Jet4 jb = jet_of(beta, e);
      jb[0] = std::max(jb[0], 0.2);
      segs.push_back({b, e, f2, g2, septic_hermite(b, e, jet_of(beta, b), jb)});
    } else {
      segs.push_back({0.0, opts.rho_max, f, g, beta});
    }
    try {
      Profile p(std::move(segs));
      if (!validate_contact(p, {2000}).valid) continue;
      bool beta_ok = true;
      for (const Segment& s : p.segments()) {
        if (!positivity_failures(s, s.local(Channel::Beta, 0), s.lo(), s.hi(), false).empty())
          beta_ok = false;
      }
      if (!beta_ok) continue;
      return p;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorCode::Construction, "random profile sampler did not find a valid profile");
}

}  // namespace reebfol
