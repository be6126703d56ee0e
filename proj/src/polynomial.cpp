#include "reebfol/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace reebfol {

double horner(std::span<const double> c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Coeffs derivative(std::span<const double> c) {
  if (c.size() <= 1) return {0.0};
  Coeffs d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

Coeffs derivative(std::span<const double> c, int order) {
  Coeffs d(c.begin(), c.end());
  for (int i = 0; i < order; ++i) d = derivative(d);
  return d;
}

Coeffs multiply(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {0.0};
  Coeffs out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Coeffs add(std::span<const double> a, std::span<const double> b) {
  Coeffs out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Coeffs subtract(std::span<const double> a, std::span<const double> b) {
  Coeffs out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

Coeffs scaled(std::span<const double> a, double s) {
  Coeffs out(a.begin(), a.end());
  for (double& v : out) v *= s;
  return out;
}

Coeffs combine(double alpha, std::span<const double> a, double beta,
               std::span<const double> b) {
  const std::size_t n = std::max(alpha != 0.0 ? a.size() : 0,
                                 beta != 0.0 ? b.size() : 0);
  Coeffs out(std::max<std::size_t>(n, 1), 0.0);
  if (alpha != 0.0) {
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = alpha * a[i];
  }
  if (beta != 0.0) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (alpha != 0.0 && i < a.size())
        out[i] += beta * b[i];
      else
        out[i] = beta * b[i];
    }
  }
  return out;
}

namespace {

// acc <- acc * (c0 + c1 x) + add, all in long double.
void horner_affine_step(std::vector<long double>& acc, long double c0, long double c1,
                        long double addend) {
  std::vector<long double> next(acc.size() + 1, 0.0L);
  for (std::size_t k = 0; k < acc.size(); ++k) {
    next[k] += acc[k] * c0;
    next[k + 1] += acc[k] * c1;
  }
  next[0] += addend;
  acc.swap(next);
}

Coeffs affine_substitute(std::span<const double> c, long double c0, long double c1) {
  if (c.empty()) return {0.0};
  std::vector<long double> acc{static_cast<long double>(c.back())};
  for (std::size_t i = c.size() - 1; i-- > 0;) horner_affine_step(acc, c0, c1, c[i]);
  acc.resize(c.size());
  Coeffs out(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k) out[k] = static_cast<double>(acc[k]);
  return out;
}

}  // namespace

Coeffs to_local(std::span<const double> global, double center, double scale) {
  return affine_substitute(global, center, scale);
}

Coeffs to_global(std::span<const double> local, double center, double scale) {
  const long double inv = 1.0L / static_cast<long double>(scale);
  return affine_substitute(local, -static_cast<long double>(center) * inv, inv);
}

double magnitude(std::span<const double> c, double a, double b) {
  const double r = std::max(std::abs(a), std::abs(b));
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

Coeffs strip_low_order_zeros(std::span<const double> c, int* removed, double rel_tol) {
  double biggest = 0.0;
  for (double v : c) biggest = std::max(biggest, std::abs(v));
  std::size_t k = 0;
  while (k + 1 < c.size() && std::abs(c[k]) <= rel_tol * biggest) ++k;
  if (removed) *removed = static_cast<int>(k);
  return Coeffs(c.begin() + static_cast<std::ptrdiff_t>(k), c.end());
}

namespace {

double bisect(std::span<const double> c, double lo, double hi, double f_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = horner(c, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

void isolate(std::span<const double> c, double a, double b, double zero_abs,
             std::vector<double>& out) {
  std::size_t n = c.size();
  while (n > 1 && c[n - 1] == 0.0) --n;
  c = c.first(n);
  if (n <= 1) {
    if (n == 1 && c[0] == 0.0) out.push_back(a);
    return;
  }
  if (n == 2) {
    const double r = -c[0] / c[1];
    if (r >= a && r <= b) out.push_back(r);
    return;
  }
  const Coeffs dc = derivative(c);
  std::vector<double> crit;
  isolate(dc, a, b, zero_abs, crit);
  std::sort(crit.begin(), crit.end());
  std::vector<double> pts{a};
  for (double x : crit)
    if (x > pts.back()) pts.push_back(x);
  if (b > pts.back()) pts.push_back(b);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = horner(c, pts[i]);
    if (std::abs(v) <= zero_abs) out.push_back(pts[i]);
    if (i + 1 < pts.size()) {
      const double w = horner(c, pts[i + 1]);
      if (std::abs(v) > zero_abs && std::abs(w) > zero_abs && ((v < 0.0) != (w < 0.0)))
        out.push_back(bisect(c, pts[i], pts[i + 1], v));
    }
  }
}

}  // namespace

RootSet real_roots(std::span<const double> c, double a, double b, double reference_scale,
                   double zero_tol) {
  RootSet rs;
  const double mag = magnitude(c, a, b);
  const double ref = std::max(reference_scale, 0.0);
  if (mag == 0.0 || (ref > 0.0 && mag <= zero_tol * ref)) {
    rs.identically_zero = true;
    return rs;
  }
  std::vector<double> raw;
  isolate(c, a, b, zero_tol * mag * 1e-3, raw);
  std::sort(raw.begin(), raw.end());
  for (double r : raw) {
    if (rs.roots.empty() || r - rs.roots.back() > 1e-12 * std::max(1.0, std::abs(r)))
      rs.roots.push_back(r);
  }
  return rs;
}

}  // namespace reebfol
