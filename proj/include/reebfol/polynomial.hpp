#pragma once

#include <span>
#include <vector>

namespace reebfol {

// Dense polynomial in a single variable, coefficients in increasing degree.
using Coeffs = std::vector<double>;

double horner(std::span<const double> c, double x);

Coeffs derivative(std::span<const double> c);
Coeffs derivative(std::span<const double> c, int order);
Coeffs multiply(std::span<const double> a, std::span<const double> b);
Coeffs add(std::span<const double> a, std::span<const double> b);
Coeffs subtract(std::span<const double> a, std::span<const double> b);
Coeffs scaled(std::span<const double> a, double s);

/// Combination alpha*a + beta*b where a zero weight drops its term entirely,
/// so that alpha = 1, beta = 0 reproduces a bit for bit.
Coeffs combine(double alpha, std::span<const double> a, double beta,
               std::span<const double> b);

/// Re-expand p(x) in the variable u = (x - center) / scale, i.e. returns
/// coefficients d with p(center + scale*u) = sum d_k u^k. Accumulates in
/// long double.
Coeffs to_local(std::span<const double> global, double center, double scale);

/// Inverse of to_local.
Coeffs to_global(std::span<const double> local, double center, double scale);

/// Sum |c_k| * R^k with R = max(|a|, |b|); a magnitude bound on [a, b].
double magnitude(std::span<const double> c, double a, double b);

struct RootSet {
  std::vector<double> roots;
  bool identically_zero = false;
};

/// All real roots of c on the closed interval [a, b], found by recursive
/// isolation between critical points followed by bisection. Touching
/// (even-multiplicity) zeros are reported when |c| at a critical point falls
/// below zero_tol times the magnitude bound. If every coefficient is below
/// zero_tol relative to `reference_scale`, the set is flagged as identically
/// zero and no roots are listed.
RootSet real_roots(std::span<const double> c, double a, double b,
                   double reference_scale = 0.0, double zero_tol = 1e-13);

/// Strips the leading run of (numerically) zero low-order coefficients,
/// returning the quotient by x^k. Used for sign checks on (0, b] when the
/// polynomial vanishes at the axis by parity.
Coeffs strip_low_order_zeros(std::span<const double> c, int* removed = nullptr,
                             double rel_tol = 1e-14);

}  // namespace reebfol
