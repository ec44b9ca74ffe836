#pragma once

#include <array>
#include <cmath>

namespace twogrid {

// Second-order forward-mode derivative of a scalar field in two variables.
// Carries the value, the gradient and the Hessian (xx, xy, yy).
struct Jet {
  double v = 0.0;
  std::array<double, 2> g{0.0, 0.0};
  std::array<double, 3> H{0.0, 0.0, 0.0};

  Jet() = default;
  Jet(double c) : v(c) {}  // NOLINT: constants promote implicitly

  static Jet var_x(double x) {
    Jet j(x);
    j.g[0] = 1.0;
    return j;
  }
  static Jet var_y(double y) {
    Jet j(y);
    j.g[1] = 1.0;
    return j;
  }

  double dx() const { return g[0]; }
  double dy() const { return g[1]; }
  double dxx() const { return H[0]; }
  double dxy() const { return H[1]; }
  double dyy() const { return H[2]; }
  double laplacian() const { return H[0] + H[2]; }
};

namespace jet_detail {

// Compose a scalar function with derivatives (f0, f1, f2) at a.v.
inline Jet chain(const Jet& a, double f0, double f1, double f2) {
  Jet r;
  r.v = f0;
  r.g = {f1 * a.g[0], f1 * a.g[1]};
  r.H = {f2 * a.g[0] * a.g[0] + f1 * a.H[0],
         f2 * a.g[0] * a.g[1] + f1 * a.H[1],
         f2 * a.g[1] * a.g[1] + f1 * a.H[2]};
  return r;
}

}  // namespace jet_detail

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v + b.v;
  for (int i = 0; i < 2; ++i) r.g[i] = a.g[i] + b.g[i];
  for (int i = 0; i < 3; ++i) r.H[i] = a.H[i] + b.H[i];
  return r;
}
inline Jet operator-(const Jet& a) {
  Jet r;
  r.v = -a.v;
  for (int i = 0; i < 2; ++i) r.g[i] = -a.g[i];
  for (int i = 0; i < 3; ++i) r.H[i] = -a.H[i];
  return r;
}
inline Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }
inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v * b.v;
  r.g = {a.g[0] * b.v + a.v * b.g[0], a.g[1] * b.v + a.v * b.g[1]};
  r.H = {a.H[0] * b.v + 2.0 * a.g[0] * b.g[0] + a.v * b.H[0],
         a.H[1] * b.v + a.g[0] * b.g[1] + a.g[1] * b.g[0] + a.v * b.H[1],
         a.H[2] * b.v + 2.0 * a.g[1] * b.g[1] + a.v * b.H[2]};
  return r;
}
inline Jet operator/(const Jet& a, const Jet& b) {
  const double iv = 1.0 / b.v;
  return a * jet_detail::chain(b, iv, -iv * iv, 2.0 * iv * iv * iv);
}
inline Jet& operator+=(Jet& a, const Jet& b) { return a = a + b; }
inline Jet& operator-=(Jet& a, const Jet& b) { return a = a - b; }
inline Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return jet_detail::chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return jet_detail::chain(a, e, e, e);
}
inline Jet log(const Jet& a) {
  return jet_detail::chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}
inline Jet sin(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return jet_detail::chain(a, s, c, -s);
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return jet_detail::chain(a, c, -s, -c);
}
inline Jet atan(const Jet& a) {
  const double d = 1.0 + a.v * a.v;
  return jet_detail::chain(a, std::atan(a.v), 1.0 / d, -2.0 * a.v / (d * d));
}

// atan2(y, x) with the binary chain rule.
inline Jet atan2(const Jet& y, const Jet& x) {
  const double r2 = x.v * x.v + y.v * y.v;
  const double r4 = r2 * r2;
  const double Fy = x.v / r2, Fx = -y.v / r2;
  const double Fyy = -2.0 * x.v * y.v / r4, Fxx = 2.0 * x.v * y.v / r4;
  const double Fxy = (y.v * y.v - x.v * x.v) / r4;
  Jet r;
  r.v = std::atan2(y.v, x.v);
  for (int i = 0; i < 2; ++i) r.g[i] = Fy * y.g[i] + Fx * x.g[i];
  const int ii[3] = {0, 0, 1}, jj[3] = {0, 1, 1};
  for (int k = 0; k < 3; ++k) {
    const int i = ii[k], j = jj[k];
    r.H[k] = Fyy * y.g[i] * y.g[j] + Fxx * x.g[i] * x.g[j] +
             Fxy * (y.g[i] * x.g[j] + x.g[i] * y.g[j]) + Fy * y.H[k] + Fx * x.H[k];
  }
  return r;
}

}  // namespace twogrid
