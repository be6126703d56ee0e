#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "reebfol/polynomial.hpp"

namespace reebfol {

enum class Channel { F = 0, G = 1, Beta = 2 };

inline constexpr int kMaxSegmentDegree = 9;
inline constexpr double kBreakpointTolerance = 1e-9;
/// Breakpoint jumps below this multiple of the monomial term magnitudes are
/// rounding in the stored coefficients, not a defect.
inline constexpr double kBreakpointRounding = 1e-13;

/// Raw segment data: coefficients in the monomial basis of the global radius.
struct SegmentData {
  double lo = 0.0;
  double hi = 0.0;
  Coeffs f, g, beta;
};

/// A polynomial piece of a profile. Besides the stored monomial coefficients
/// it keeps an equivalent expansion in u = (rho - center) / scale, which is
/// what every evaluation and product goes through.
class Segment {
 public:
  explicit Segment(SegmentData data);

  double lo() const { return data_.lo; }
  double hi() const { return data_.hi; }
  bool touches_axis() const { return data_.lo == 0.0; }
  double center() const { return center_; }
  double scale() const { return scale_; }
  double to_u(double rho) const { return (rho - center_) / scale_; }
  double from_u(double u) const { return center_ + scale_ * u; }

  const SegmentData& data() const { return data_; }
  const Coeffs& global(Channel ch) const;

  /// Coefficients in u of the order-th derivative with respect to rho.
  const Coeffs& local(Channel ch, int order) const {
    return local_[static_cast<int>(ch)][order];
  }

  double eval(Channel ch, int order, double rho) const;

 private:
  SegmentData data_;
  double center_ = 0.0;
  double scale_ = 1.0;
  std::array<std::array<Coeffs, 4>, 3> local_;
};

/// f, g, beta and their first three derivatives at one radius.
struct Jet {
  std::array<double, 4> f{}, g{}, beta{};
};

/// Rotationally symmetric data lambda = f(rho) dtheta + g(rho) dphi with
/// J v1 = beta(rho) v2, as a piecewise polynomial on [rho_min, rho_max].
/// rho_min = 0 means the profile reaches the axis; otherwise it is a profile
/// on an annulus (the outer part handed to a surgery).
class Profile {
 public:
  /// Builds and checks the structural invariants: contiguous coverage,
  /// degree <= 9, C^3 agreement at breakpoints, and axis smoothness when the
  /// first segment starts at 0. Throws Error(Structural).
  explicit Profile(std::vector<SegmentData> segments);

  double rho_min() const { return segments_.front().lo(); }
  double rho_max() const { return segments_.back().hi(); }
  bool reaches_axis() const { return segments_.front().touches_axis(); }

  const std::vector<Segment>& segments() const { return segments_; }
  std::vector<SegmentData> segment_data() const;

  /// Index of the segment used to evaluate at rho (clamped to the ends).
  std::size_t segment_index(double rho) const;

  /// Checked evaluation; throws Error(Domain) outside [rho_min, rho_max].
  double eval(double rho, Channel ch, int order) const;

  /// Unchecked evaluation: outside the domain the end segments extrapolate.
  double eval_unchecked(double rho, Channel ch, int order) const;

  Jet jet(double rho) const;

 private:
  std::vector<Segment> segments_;
};

/// Wronskian D = f g' - f' g.
double wronskian(const Profile& profile, double rho);

struct Violation {
  std::optional<double> rho;  // empty means "axis"
  std::string condition;
  double value = 0.0;
};

struct ContactReport {
  bool valid = true;
  std::vector<Violation> violations;
  std::optional<double> d_prime_at_zero;
};

struct ContactOptions {
  int grid_points = 10000;
};

/// Positive contact condition: D > 0 on (0, rho_max] (sampled grid plus root
/// isolation of D on every segment) and f(0) g''(0) > 0 at the axis.
ContactReport validate_contact(const Profile& profile, const ContactOptions& opts = {});

struct ReebField {
  double theta = 0.0;
  double phi = 0.0;
};

/// Reeb vector field components (g'/D, -f'/D); at rho = 0 the axis limit
/// (1/f(0), -f''(0)/(f(0) g''(0))). Throws Error(InvalidProfile) where the
/// contact condition fails at rho.
ReebField reeb_field(const Profile& profile, double rho);

// Per-segment polynomials in the segment's local variable u.
Coeffs wronskian_poly(const Segment& seg);
/// f' g'' - f'' g'.
Coeffs acceleration_poly(const Segment& seg);
/// q f' - 2 pi p g'.
Coeffs slope_poly(const Segment& seg, int p, int q);

/// Positivity of a segment polynomial on the radius interval [a, b]; when
/// a is the axis and `open_at_axis` holds, the low-order zeros forced by
/// parity are divided out first. Returns the radii of sign failures (empty
/// when positive).
std::vector<double> positivity_failures(const Segment& seg, const Coeffs& poly_u,
                                        double a, double b, bool open_at_axis);

/// Same over a whole profile range [a, b] (a may be 0 = open at the axis).
/// `which` builds the per-segment polynomial.
template <class Builder>
std::vector<double> positivity_failures(const Profile& profile, double a, double b,
                                        Builder&& which) {
  std::vector<double> out;
  for (const Segment& seg : profile.segments()) {
    const double lo = std::max(a, seg.lo());
    const double hi = std::min(b, seg.hi());
    if (hi < lo) continue;
    const bool open = (lo == 0.0);
    auto f = positivity_failures(seg, which(seg), lo, hi, open);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

}  // namespace reebfol
