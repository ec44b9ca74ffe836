#pragma once

#include <utility>
#include <vector>

#include "twogrid/grid.hpp"
#include "twogrid/rational.hpp"

namespace twogrid {

// Node-independent stencil weights in a documented layout.
//   1D:       [left, centre, right]
//   2D 3x3:   index 3*(dj+1) + (di+1), bottom row first
//   hanging:  [(0,-h), (h,-h), (0,0), (h,0), (0,+h), (h,+h), hanging node]
// The discrete equation is sum alpha_k U_k = sum beta_k f_k (+ correction).
template <class T>
struct LocalStencil {
  std::vector<T> alpha;
  std::vector<T> beta;
};

// A stencil bound to grid nodes.
struct Stencil {
  NodeId center = kNoNode;
  std::vector<std::pair<NodeId, double>> alphas;
  std::vector<std::pair<NodeId, double>> betas;
  double correction = 0.0;
};

inline constexpr int idx3(int di, int dj) { return 3 * (dj + 1) + (di + 1); }

template <class T>
T sum(const std::vector<T>& v) {
  T s = 0;
  for (const auto& x : v) s += x;
  return s;
}

namespace detail {
template <class T>
void fold_K(LocalStencil<T>& s, const T& K) {
  for (std::size_t k = 0; k < s.alpha.size(); ++k) s.alpha[k] += K * s.beta[k];
}
}  // namespace detail

// kappa (U_{i-1} - 2U_i + U_{i+1}) / h^2 = (f_{i-1} + 10 f_i + f_{i+1}) / 12,
// with K u folded into alpha through the beta weights.
template <class T>
LocalStencil<T> compact4_uniform_1d(const T& kappa, const T& K, const T& h) {
  LocalStencil<T> s;
  const T a = kappa / (h * h);
  s.alpha = {a, T(-2) * a, a};
  s.beta = {T(1) / 12, T(10) / 12, T(1) / 12};
  detail::fold_K(s, K);
  return s;
}

// Compact fourth-order scheme on spacings h1 (left) and h2 (right).
template <class T>
LocalStencil<T> border_coeffs_1d(const T& h1, const T& h2, const T& kappa, const T& K) {
  LocalStencil<T> s;
  const T hs = h1 + h2;
  T am = T(2) / (h1 * hs), ap = T(2) / (h2 * hs), a0 = T(-2) / (h1 * h2);
  s.alpha = {kappa * am, kappa * a0, kappa * ap};
  T bm = (h1 * h1 - h2 * h2 + h1 * h2) / (T(6) * h1 * hs);
  T bp = (h2 * h2 - h1 * h1 + h1 * h2) / (T(6) * h2 * hs);
  T b0 = (h1 * h1 + h2 * h2 + T(3) * h1 * h2) / (T(6) * h1 * h2);
  s.beta = {bm, b0, bp};
  detail::fold_K(s, K);
  return s;
}

// Three-point centred scheme for eps u'' + p u' + q u on spacings (h1, h2).
template <class T>
LocalStencil<T> centered_nonuniform_1d(const T& eps, const T& p, const T& q, const T& h1, const T& h2) {
  LocalStencil<T> s;
  const T hs = h1 + h2;
  T dm = T(2) / (h1 * hs), d0 = T(-2) / (h1 * h2), dp = T(2) / (h2 * hs);
  T cm = -(h2 / h1) / hs, c0 = (h2 / h1 - h1 / h2) / hs, cp = (h1 / h2) / hs;
  s.alpha = {eps * dm + p * cm, eps * d0 + p * c0 + q, eps * dp + p * cp};
  s.beta = {T(0), T(1), T(0)};
  return s;
}

// (kappa L_h + K M_h) U = M_h f on a square cell.
template <class T>
LocalStencil<T> nine_point_compact_2d(const T& h, const T& K, const T& kappa = T(1)) {
  LocalStencil<T> s;
  const T c = kappa / (T(6) * h * h);
  s.alpha.assign(9, c);
  for (int k : {idx3(-1, 0), idx3(1, 0), idx3(0, -1), idx3(0, 1)}) s.alpha[k] = T(4) * c;
  s.alpha[idx3(0, 0)] = T(-20) * c;
  s.beta.assign(9, T(0));
  for (int k : {idx3(-1, 0), idx3(1, 0), idx3(0, -1), idx3(0, 1)}) s.beta[k] = T(1) / 12;
  s.beta[idx3(0, 0)] = T(8) / 12;
  detail::fold_K(s, K);
  return s;
}

// (1 + h_y^2/12 d_yy) [x-operator U] + d_yy U = (1 + h_y^2/12 d_yy) f, where
// the x-operator has weights (gl, gc, gr) on the three columns.
template <class T>
LocalStencil<T> strip_with_x_weights(const T& gl, const T& gc, const T& gr, const T& h_y) {
  LocalStencil<T> s;
  s.alpha.assign(9, T(0));
  const T g[3] = {gl, gc, gr};
  const T w[3] = {T(1) / 12, T(10) / 12, T(1) / 12};
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) s.alpha[idx3(di, dj)] = w[dj + 1] * g[di + 1];
  const T b = T(1) / (h_y * h_y);
  s.alpha[idx3(0, -1)] += b;
  s.alpha[idx3(0, 1)] += b;
  s.alpha[idx3(0, 0)] -= T(2) * b;
  s.beta.assign(9, T(0));
  s.beta[idx3(0, -1)] = w[0];
  s.beta[idx3(0, 0)] = w[1];
  s.beta[idx3(0, 1)] = w[2];
  return s;
}

// Second order in x on spacing h_f, fourth order in y on spacing h_y.
template <class T>
LocalStencil<T> strip_mixed_order_2d(const T& h_f, const T& h_y) {
  const T a = T(1) / (h_f * h_f);
  return strip_with_x_weights<T>(a, T(-2) * a, a, h_y);
}

// Compact 3x3 scheme at a node with x spacings h1 (left), h2 (right) and
// y spacing h_y, for Laplace(u) = f. Coefficients from the undetermined-
// coefficient derivation (exact for polynomials of degree <= 4).
template <class T>
LocalStencil<T> border_coeffs_2d(const T& h1, const T& h2, const T& hy) {
  LocalStencil<T> s;
  const T hs = h1 + h2, y2 = hy * hy;
  const T p = h1 * h1, q = h2 * h2, m = h1 * h2;
  const T cl = (p + m - q + y2) / (T(6) * h1 * y2 * hs);
  const T cm = (p + T(3) * m + q - y2) / (T(6) * m * y2);
  const T cr = -(p - m - q - y2) / (T(6) * h2 * y2 * hs);
  const T ml = -(p + m - q - T(5) * y2) / (T(3) * h1 * y2 * hs);
  const T mc = -(p + T(3) * m + q + T(5) * y2) / (T(3) * m * y2);
  const T mr = (p - m - q + T(5) * y2) / (T(3) * h2 * y2 * hs);
  s.alpha = {cl, cm, cr, ml, mc, mr, cl, cm, cr};
  const T bl = (p + m - q) / (T(6) * h1 * hs);
  const T bc = hs * hs / (T(6) * m);
  const T br = -(p - m - q) / (T(6) * h2 * hs);
  s.beta = {T(0), T(1) / 12, T(0), bl, bc, br, T(0), T(1) / 12, T(0)};
  return s;
}

// The same stencil transcribed from the published closed form
// (sigma = h1 h2 (h1+h2), mu = h1^2 - h2^2, nu = h1^2 + h2^2). Its source
// weights differ from the derived ones; kept for comparison only.
template <class T>
LocalStencil<T> border_coeffs_2d_printed(const T& h1, const T& h2, const T& hy) {
  LocalStencil<T> s;
  const T sigma = h1 * h2 * (h1 + h2), mu = h1 * h1 - h2 * h2, nu = h1 * h1 + h2 * h2;
  const T y2 = hy * hy, m = h1 * h2;
  const T u = T(6) * sigma * y2;
  const T tl = h2 * (m + y2 + mu) / u;
  const T tm = (h1 + h2) * (T(3) * m - y2 + nu) / u;
  const T tr = h1 * (m + y2 - mu) / u;
  const T ml = T(-2) * h2 * (m - T(5) * y2 + mu) / u;
  const T mc = T(-2) * (h1 + h2) * (T(3) * m + T(5) * y2 + nu) / u;
  const T mr = T(-2) * h1 * (m - T(5) * y2 - mu) / u;
  s.alpha = {tl, tm, tr, ml, mc, mr, tl, tm, tr};
  const T f = T(12) * sigma;
  const T hs = h1 + h2;
  s.beta = {T(0), sigma / f, T(0), T(2) * h2 * (m - nu) / f, T(2) * hs * hs * hs / f,
            T(2) * h1 * (m + nu) / f, T(0), sigma / f, T(0)};
  return s;
}

// Hanging-node coefficients from the stored tables (kappa = 1, K = 0, h = 1;
// scale alpha by kappa/h^2). Throws UnsupportedRatio unless r is 2, 4, 8 or 16.
LocalStencil<Rational> hanging_coeffs(int r, int j);

// Derives the hanging-node stencil for any r >= 2 (h = 1). Results for
// kappa = 1, K = 0 are cached per (r, j).
LocalStencil<Rational> derive_hanging_coeffs(int r, int j, const Rational& kappa = 1, const Rational& K = 0);

// Derives the 1D border stencil and the 2D border stencil with the engine.
LocalStencil<Rational> derive_border_1d(const Rational& h1, const Rational& h2, const Rational& kappa = 1,
                                        const Rational& K = 0);
LocalStencil<Rational> derive_border_2d(const Rational& h1, const Rational& h2, const Rational& hy);

// Swaps the (0, .) and (h, .) columns of a hanging stencil.
template <class T>
LocalStencil<T> reverse_hanging(const LocalStencil<T>& s) {
  LocalStencil<T> out = s;
  for (auto* v : {&out.alpha, &out.beta}) {
    std::swap((*v)[0], (*v)[1]);
    std::swap((*v)[2], (*v)[3]);
    std::swap((*v)[4], (*v)[5]);
  }
  return out;
}

// Diagonal negative, off-diagonals nonnegative. `diag` is the centre index.
template <class T>
bool has_sign_property(const LocalStencil<T>& s, std::size_t diag) {
  for (std::size_t k = 0; k < s.alpha.size(); ++k) {
    if (k == diag ? !(s.alpha[k] < 0) : (s.alpha[k] < 0)) return false;
  }
  return true;
}

}  // namespace twogrid
