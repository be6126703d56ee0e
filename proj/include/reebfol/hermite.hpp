#pragma once

#include <array>

#include "reebfol/polynomial.hpp"

namespace reebfol {

using Jet4 = std::array<double, 4>;  // value and first three derivatives

/// Degree-7 polynomial on [a, b] matching the 4-jets ja at a and jb at b.
/// Solved in the local variable of the interval, returned in the global
/// monomial basis.
Coeffs septic_hermite(double a, double b, const Jet4& ja, const Jet4& jb);

/// Even polynomial c0 + sum_{k=1..4} A_k rho^{2k} on [0, t1] whose 4-jet at
/// t1 equals j. c0 is fixed by the caller (0 for g).
Coeffs even_axis_fit(double t1, double c0, const Jet4& j);

/// 4-jet of a global-basis polynomial at x.
Jet4 jet_of(const Coeffs& c, double x);

}  // namespace reebfol
