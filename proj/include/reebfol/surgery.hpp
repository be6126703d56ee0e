#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reebfol/profile.hpp"

namespace reebfol {

/// Rows (n q; m p) acting on (theta', eta') with eta = phi / 2 pi.
struct SurgeryMatrix {
  int n = 1, q = 0, m = 0, p = 1;

  long long det() const { return static_cast<long long>(n) * p - static_cast<long long>(q) * m; }
  /// Throws Error(Matrix) unless det = 1.
  void require_sl2z() const;
  static SurgeryMatrix identity() { return {}; }
  SurgeryMatrix operator*(const SurgeryMatrix& o) const;
};

enum class TwistKind { None, Half, Full };

std::string to_string(TwistKind kind);
TwistKind twist_from_string(const std::string& s);

struct SurgeryPlan {
  SurgeryMatrix matrix;
  double delta = 0.0;
  double epsilon = 0.0;
  TwistKind twist = TwistKind::Half;
  double gap = 1e-2;
};

/// Half or full Lutz twist on [0, delta] of a profile equal to (1, rho^2) on
/// [delta, epsilon] (epsilon defaults to rho_max). The result agrees with
/// the input segment by segment above delta.
Profile lutz_twist(const Profile& profile, TwistKind kind, double delta,
                   std::optional<double> epsilon = std::nullopt);

/// (f_K, g_K) = (n f + 2 pi m g, (q / 2 pi) f + p g) on [delta, epsilon].
/// beta is carried over unchanged. Throws Error(Matrix) if det != 1.
Profile surgery_pullback(const Profile& profile, const SurgeryMatrix& matrix, double delta,
                         double epsilon);

struct CoreConstraints {
  int p = 1, q = 0;   // type of the innermost torus of the outer profile
  double gap = 1e-2;  // condition (4) window (0, gap]
};

/// What extend_core certified about its output.
struct CoreReport {
  bool trivial = false;          // outer's inner polynomial continued to the axis
  std::optional<double> rho1;    // largest torus radius of type (p, q) in the outer
  bool contact = false;
  bool inward_acceleration = false;  // f'g'' - f''g' > 0 on (0, rho1]
  bool no_core_torus = false;        // no torus of type (p, q) on (0, delta]
  std::optional<double> slope_gap;   // f'(r)/g'(r) - f''(0)/g''(0), q != 0 only
  bool central_nondegenerate = false;
  std::string layout;
};

/// Extends a profile given on [delta, epsilon] to [0, epsilon]. Throws
/// Error(Construction) when no candidate extension can be certified.
Profile extend_core(const Profile& outer, const CoreConstraints& constraints,
                    CoreReport* report = nullptr);

struct SurgeryResult {
  Profile profile;
  CoreReport core;
  std::optional<double> lutz_radius;  // rho1 of the twisted base
};

/// Twist (optional), pullback on [delta, epsilon], then core extension with
/// constraints of type (n, q).
SurgeryResult perform_surgery(const Profile& base, const SurgeryPlan& plan);

struct LiftComponent {
  long long count = 0;
  long long lk_each = 0;
};

struct LiftArithmetic {
  std::vector<long long> linking_numbers;
  long long n = 1;
  std::vector<LiftComponent> components;
};

/// n = lcm of the linking numbers; component j lifts to gcd(n, l_j)
/// components with linking l_j / gcd(n, l_j) each.
LiftArithmetic cover_lift(const std::vector<long long>& linking_numbers);

/// Class of a torus curve (meridian, longitude) downstairs, written as
/// coefficients on (lambda', mu') upstairs.
std::pair<long long, long long> orbit_homology_class(const SurgeryMatrix& matrix,
                                                     std::pair<long long, long long> torus_class);

}  // namespace reebfol
