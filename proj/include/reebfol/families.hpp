#pragma once

#include <random>

#include "reebfol/profile.hpp"

namespace reebfol {

/// f = c, g = c rho^2, beta = 1 on [0, rho_max].
Profile standard_profile(double rho_max = 1.0, double c = 1.0);

/// f = 1, g = -rho^2: orientation-reversed, not positive contact.
Profile mirrored_standard_profile(double rho_max = 1.0);

/// The standard form in the coordinates of a neighbourhood of the Hopf
/// fiber through infinity: f = pi, g = pi rho^2, beta = 2 pi / (1 - 2 pi rho^2)
/// replaced by its Taylor polynomial through rho^8. rho_max < 1/sqrt(2 pi).
Profile hopf_chart_profile(double rho_max = 0.35);

struct StabilizationShape {
  double curvature = 0.01;  // h''(0)
  double t1 = 0.1;          // h = 1 + curvature/2 rho^2 on [0, t1]
  double delta = 0.3;       // h = 1 on [delta, rho_max]
  double rho_max = 0.35;
};

/// f = pi h, g = pi rho^2 h with h'' (0) = curvature, joined C^3 to h = 1 by
/// a septic Hermite piece on [t1, delta]. beta as in hopf_chart_profile.
Profile stabilized_chart_profile(const StabilizationShape& shape = {});

struct RandomProfileOptions {
  double rho_max = 1.0;
  bool two_segments = true;
  /// Probability of forcing f''(0)/(2 pi g''(0)) onto a rational with small
  /// denominator, so that some central covers are degenerate.
  double degenerate_fraction = 0.2;
};

/// A random positive contact profile (rejection-sampled until valid).
Profile random_contact_profile(std::mt19937_64& rng, const RandomProfileOptions& opts = {});

}  // namespace reebfol
