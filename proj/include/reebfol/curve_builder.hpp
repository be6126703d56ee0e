#pragma once

// Planar curves t -> P(t) = f(t) + i g(t) used to rebuild a profile on the
// core [0, delta]. The curve is prescribed through its speed S and tangent
// angle psi, both polynomials in t with the parity forced by axis
// smoothness, and then sampled into C^3 polynomial segments.

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "reebfol/profile.hpp"

namespace reebfol {

using Complex = std::complex<double>;

/// P, P', P'', P''' at one radius.
struct PlaneJet {
  std::array<Complex, 4> d{};
};

PlaneJet plane_jet(const Profile& profile, double rho);

struct InnerCurveParams {
  double delta = 0.0;
  double psi0 = 0.0;       // tangent angle at the axis
  double psi_delta = 0.0;  // tangent angle at delta, lifted to the intended winding
  double f0 = 0.0;         // value of f on the axis
  double chi1 = 0.0;       // psi(t) = psi0 + chi1 t^2 + ...
};

class InnerCurve {
 public:
  /// Fits psi (degree 8 even) and S (degree 9 odd) so that the curve ends
  /// with the given 3-jet at delta and starts on the real axis at f0.
  /// Returns nothing when the fit has S <= 0 somewhere on (0, delta].
  static std::optional<InnerCurve> build(const PlaneJet& at_delta, const InnerCurveParams& par);

  PlaneJet at(double t) const;
  double delta() const { return delta_; }
  double speed(double t) const;
  double angle(double t) const;
  /// Minimum over a fine grid of psi'(t)/t (positive means the tangent turns
  /// counterclockwise throughout).
  double min_turning_rate() const;

 private:
  double delta_ = 0.0;
  Complex end_{};
  Coeffs psi_x_;  // in x = t / delta
  Coeffs s_x_;
};

struct PolarCurveParams {
  double delta = 0.0;
  double r0 = 1.0;          // |P(0)|
  double alpha0 = 0.0;      // 0 or pi: the side of the axis P(0) sits on
  double alpha_delta = 0.0; // arg P(delta), lifted to the intended winding
};

/// P = r e^{i alpha} with r and alpha even polynomials of degree 8 in t,
/// fitted to the 3-jet at delta. Here D = r^2 alpha', so the curve is contact
/// exactly where alpha increases.
class PolarCurve {
 public:
  /// Returns nothing unless r > 0 and alpha' / t > 0 on (0, delta].
  static std::optional<PolarCurve> build(const PlaneJet& at_delta, const PolarCurveParams& par);

  PlaneJet at(double t) const;
  double delta() const { return delta_; }
  double radius(double t) const;
  double angle(double t) const;

 private:
  double delta_ = 0.0;
  Coeffs r_x_, alpha_x_;  // in x = t / delta
};

struct SplineLayout {
  double t1_fraction = 0.4;
  int septic_pieces = 2;
};

/// Samples the curve into segments on [0, delta]: an even degree-8 axis
/// piece on [0, t1] and septic Hermite pieces after it. The jet at delta is
/// taken from `outer_at_delta` so that the join is exact. beta is a global
/// polynomial shared by all pieces.
std::vector<SegmentData> spline_inner_curve(const InnerCurve& curve, const SplineLayout& layout,
                                            const PlaneJet& outer_at_delta, const Coeffs& beta);
std::vector<SegmentData> spline_inner_curve(const PolarCurve& curve, const SplineLayout& layout,
                                            const PlaneJet& outer_at_delta, const Coeffs& beta);

}  // namespace reebfol
