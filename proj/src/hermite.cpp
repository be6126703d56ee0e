#include "reebfol/hermite.hpp"

#include <Eigen/Dense>

namespace reebfol {

namespace {

// d^j/du^j u^k at u.
double monomial_derivative(int k, int j, double u) {
  if (j > k) return 0.0;
  double c = 1.0;
  for (int i = 0; i < j; ++i) c *= static_cast<double>(k - i);
  double p = 1.0;
  for (int i = 0; i < k - j; ++i) p *= u;
  return c * p;
}

}  // namespace

Coeffs septic_hermite(double a, double b, const Jet4& ja, const Jet4& jb) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Eigen::Matrix<double, 8, 8> m;
  Eigen::Matrix<double, 8, 1> rhs;
  double hk = 1.0;
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 8; ++k) {
      m(j, k) = monomial_derivative(k, j, -1.0);
      m(4 + j, k) = monomial_derivative(k, j, 1.0);
    }
    rhs(j) = ja[j] * hk;
    rhs(4 + j) = jb[j] * hk;
    hk *= h;
  }
  const Eigen::Matrix<double, 8, 1> x = m.fullPivLu().solve(rhs);
  Coeffs local(x.data(), x.data() + 8);
  return to_global(local, c, h);
}

Coeffs even_axis_fit(double t1, double c0, const Jet4& j) {
  Eigen::Matrix4d m;
  Eigen::Vector4d rhs;
  double hk = 1.0;
  for (int r = 0; r < 4; ++r) {
    for (int k = 1; k <= 4; ++k) m(r, k - 1) = monomial_derivative(2 * k, r, 1.0);
    rhs(r) = j[r] * hk - (r == 0 ? c0 : 0.0);
    hk *= t1;
  }
  const Eigen::Vector4d x = m.fullPivLu().solve(rhs);
  Coeffs out(9, 0.0);
  out[0] = c0;
  double scale = 1.0;
  for (int k = 1; k <= 4; ++k) {
    scale /= t1 * t1;
    out[2 * k] = x(k - 1) * scale;
  }
  return out;
}

Jet4 jet_of(const Coeffs& c, double x) {
  Jet4 j{};
  Coeffs d = c;
  for (int k = 0; k < 4; ++k) {
    j[k] = horner(d, x);
    d = derivative(d);
  }
  return j;
}

}  // namespace reebfol
