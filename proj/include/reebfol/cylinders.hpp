#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reebfol/profile.hpp"

namespace reebfol {

enum class EndTarget { Torus, Central, Removable, Open };

std::string to_string(EndTarget t);

struct Puncture {
  int end = +1;       // +1 for s -> +inf, -1 for s -> -inf
  int sign = 0;       // sigma; 0 when undefined (open end or not Morse-Bott)
  EndTarget target = EndTarget::Open;
  double r = 0.0;     // torus radius, 0 for the axis, rho bound for open ends
  int cover = 1;
  bool resolved = false;
  double gap = 0.0;   // |rho - r| at the clipped sample
  double rate = 0.0;  // d/drho of the rho equation at r (exponential rate)
};

struct CurveTopology {
  int genus = 0;
  int punctures = 2;
  int boundary = 0;
  int euler() const { return 2 - 2 * genus - punctures - boundary; }
};

struct LeafSample {
  double s = 0.0, a = 0.0, rho = 0.0;
};

struct CylinderLeaf {
  int p = 0, q = 0;  // signed so that q f' - 2 pi p g' > 0 on (rho_minus, rho_plus)
  double theta0 = 0.0, phi0 = 0.0;
  double rho_minus = 0.0, rho_plus = 0.0;
  std::vector<LeafSample> samples;
  Puncture minus, plus;
  CurveTopology topology;
  std::optional<int> index;
  bool certifiable = true;
  bool plane = false;  // removable puncture at the axis (filled, not sampled)
  std::vector<std::string> warnings;
};

struct IntegrationOptions {
  double asymptote_tol = 1e-6;
  double s_max = 1e3;
  double rtol = 1e-12;  // relative to the step increment
  double atol = 1e-15;
  double max_drho = 1e-3;   // bound on consecutive rho steps
  double target_drho = 5e-5;  // rho step the stepper aims for
  double max_ds = 0.02;     // bound on consecutive s steps
  double max_rate_step = 0.005;  // bound on |ds * dF/drho|
  double min_extent = 0.0;  // keep integrating each end until |s| >= this or rho stops moving
};

/// Elementary interval (rho_minus, rho_plus) around rho: the nearest roots of
/// q f' - 2 pi p g' below and above, or the profile ends.
std::pair<double, double> elementary_interval(const Profile& profile, int p, int q, double rho);

/// Signs (p, q) so that q f' - 2 pi p g' > 0 on (lo, hi). Throws
/// Error(IntervalNotElementary) for an interior zero.
std::pair<int, int> sign_convention(const Profile& profile, double lo, double hi, int p, int q);

CylinderLeaf integrate_cylinder(const Profile& profile, int p, int q, double rho_start,
                                double a_start = 0.0, double theta0 = 0.0, double phi0 = 0.0,
                                const IntegrationOptions& opts = {});

/// Keeps the samples of `leaf` from the one nearest s_match upward and
/// re-integrates below it on `profile`, landing on the old sample times
/// while they last. The minus end is reclassified on the new profile.
CylinderLeaf reintegrate_below(const Profile& profile, const CylinderLeaf& leaf, double s_match,
                               const IntegrationOptions& opts = {});

/// Max residual of the Cauchy-Riemann system under the ansatz, with
/// (a_s, rho_s) from 5-point finite differences of the samples.
double cr_residual(const CylinderLeaf& leaf, const Profile& profile);

/// sgn(f'g'' - f''g') at a Morse-Bott torus; Error(NotMorseBott) otherwise.
int puncture_sign(const Profile& profile, double r);

/// sgn(f'(rho_plus)/g'(rho_plus) - f''(0)/g''(0)); with no torus at the
/// other end the slope 2 pi p / q replaces f'/g' there. Cross-checked
/// against -sgn(q) sgn(g''(0)): Error(SignConvention) on mismatch,
/// Error(DegenerateCover) when the |q|-fold cover is degenerate.
int central_puncture_sign(const Profile& profile, int p, int q,
                          std::optional<double> rho_plus = std::nullopt);

/// sigma_plus (1 - 2 sgn(f(0)) p).
int cz_torus_puncture(const Profile& profile, int p, int sigma_plus);

/// Index of a cylinder from the |q|-fold axis orbit to a torus.
int cylinder_index(const Profile& profile, int p, int q, int sigma_minus);

int fredholm_index(int mu, const CurveTopology& topology);

struct EnergyReport {
  double numeric = 0.0;
  double boundary_term = 0.0;
  double tail = 0.0;  // |a'(+inf) - a'(s_last)| + |a'(s_first) - a'(-inf)|
  std::optional<double> period_plus, period_minus;
};

/// d lambda-energy of the leaf. Refuses (Error(SlowConvergence)) when an
/// end is unresolved unless `allow_truncated` is set.
EnergyReport dlambda_energy(const CylinderLeaf& leaf, const Profile& profile,
                            bool allow_truncated = false);

/// The leaf restricted to s in [s_lo, s_hi]; ends become unresolved.
CylinderLeaf truncate_leaf(const CylinderLeaf& leaf, double s_lo, double s_hi);

/// Bound on |a(-inf) - a(s_first)| for a plane: the exponential tail of
/// |2 pi p g(rho(s))| beyond the first sample.
double plane_tail_bound(const CylinderLeaf& leaf, const Profile& profile);

/// Total variation of a over the samples with s < s_cut.
double total_variation_below(const CylinderLeaf& leaf, double s_cut);

}  // namespace reebfol
