#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "reebfol/profile.hpp"

namespace reebfol {

/// Threshold on |f''g' - f'g''| below which a torus is not Morse-Bott.
inline constexpr double kMorseBottThreshold = 1e-9;
/// Integer test on k f''(0) / (2 pi g''(0)).
inline constexpr double kDegeneracyTolerance = 1e-9;
inline constexpr double kBorderlineBand = 1e-6;

struct OrbitTorus {
  double r = 0.0;
  int p = 0, q = 0;  // sgn p = sgn f'(r), sgn q = sgn g'(r), so that T > 0
  double T = 0.0;
  bool morse_bott = false;
  std::optional<std::pair<int, int>> homology_note;
};

struct CentralOrbit {
  double period = 0.0;  // |f(0)|, the period of the simple orbit
  int k = 1;
  bool degenerate = false;
  bool borderline = false;
  std::optional<int> cz;  // present iff nondegenerate
  double rotation = 0.0;  // k f''(0) / (2 pi g''(0))
};

struct WindingResult {
  bool degenerate = false;
  std::optional<int> cz;
  double winding = 0.0;  // total winding in turns, oriented by d lambda
};

/// gcd with gcd(x, 0) = |x|; (0, 0) is rejected.
std::pair<int, int> normalize_slope(int p, int q);

/// q f' - 2 pi p g'.
double slope_residual(const Profile& profile, double rho, int p, int q);

/// All radii in [lo, hi] with q f' - 2 pi p g' = 0. Throws
/// Error(ContinuumOfTori) when that polynomial vanishes identically on a
/// piece of the interval.
std::vector<OrbitTorus> scan_tori(const Profile& profile, int p, int q, double lo, double hi);

/// Minimal period from q D / g' or 2 pi p D / f', whichever denominator is
/// larger. Throws Error(DegenerateSlope) if both vanish.
double torus_period(const Profile& profile, double r, int p, int q);

/// f''g' - f'g'' at r.
double morse_bott_value(const Profile& profile, double r);
bool is_morse_bott(const Profile& profile, double r);

/// Closed-form index of the k-fold cover of the axis orbit in the
/// coordinate trivialization. Throws Error(InvalidProfile) when f(0) = 0
/// or the profile does not reach the axis.
CentralOrbit central_cz(const Profile& profile, int k);

/// Index of the same orbit by integrating the linearized transverse flow.
/// The axis rates come from solving the Reeb equations at two small radii,
/// not from the closed-form limit.
WindingResult winding_oracle(const Profile& profile, int k);

/// Integrates the Reeb flow on the torus rho = r from (0, 0) until the
/// displacement (q, -2 pi p) is reached. Throws Error(NonClosing) otherwise.
double reeb_return_time(const Profile& profile, double r, int p, int q);

}  // namespace reebfol
