#include "twogrid/stencils.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "twogrid/derive.hpp"
#include "twogrid/errors.hpp"

namespace twogrid {

namespace {

struct HangingRow {
  int num, den;                  // j / r in lowest terms, <= 1/2
  const char* a[7];              // h^2 alpha in the hanging layout
  const char* b0;                // beta at (0,0); beta at (h,0) is 1 - b0
};

// One row per reduced offset j/r <= 1/2. Offsets above 1/2 are mirror images.
const HangingRow kHangingRows[] = {
    {1, 2, {"1/2", "1/2", "3", "3", "1/2", "1/2", "-8"}, "1/2"},
    {1, 4, {"7/12", "5/12", "41/6", "11/6", "7/12", "5/12", "-32/3"}, "7/12"},
    {1, 8, {"5/8", "3/8", "59/4", "43/28", "5/8", "3/8", "-128/7"}, "5/8"},
    {3, 8, {"13/24", "11/24", "17/4", "137/60", "13/24", "11/24", "-128/15"}, "13/24"},
    {1, 16, {"31/48", "17/48", "737/24", "57/40", "31/48", "17/48", "-512/15"}, "31/48"},
    {3, 16, {"29/48", "19/48", "227/24", "521/312", "29/48", "19/48", "-512/39"}, "29/48"},
    {5, 16, {"9/16", "7/16", "211/40", "179/88", "9/16", "7/16", "-512/55"}, "9/16"},
    {7, 16, {"25/48", "23/48", "593/168", "187/72", "25/48", "23/48", "-512/63"}, "25/48"},
};

Rational q(const char* s) {
  Rational v(s);
  v.canonicalize();
  return v;
}

void check_offset(int r, int j) {
  if (r < 2) throw Error(ErrorKind::BadParams, "refinement ratio must be >= 2");
  if (j < 1 || j > r - 1) throw Error(ErrorKind::BadParams, "hanging offset j must satisfy 1 <= j <= r-1");
}

}  // namespace

LocalStencil<Rational> hanging_coeffs(int r, int j) {
  if (r != 2 && r != 4 && r != 8 && r != 16)
    throw Error(ErrorKind::UnsupportedRatio, "no hanging-node table for r = " + std::to_string(r));
  check_offset(r, j);
  const bool mirrored = 2 * j > r;
  int num = mirrored ? r - j : j, den = r;
  const int g = std::gcd(num, den);
  num /= g;
  den /= g;
  for (const auto& row : kHangingRows) {
    if (row.num != num || row.den != den) continue;
    LocalStencil<Rational> s;
    for (const char* a : row.a) s.alpha.push_back(q(a));
    const Rational b0 = q(row.b0);
    s.beta = {0, 0, b0, Rational(1 - b0), 0, 0, 0};
    return mirrored ? reverse_hanging(s) : s;
  }
  throw Error(ErrorKind::UnsupportedRatio, "offset outside the stored tables");
}

LocalStencil<Rational> derive_hanging_coeffs(int r, int j, const Rational& kappa, const Rational& K) {
  check_offset(r, j);
  if (sgn(kappa) <= 0) throw Error(ErrorKind::BadParams, "kappa must be positive");

  const bool cacheable = kappa == 1 && sgn(K) == 0;
  static std::mutex mu;
  static std::map<std::pair<int, int>, LocalStencil<Rational>> cache;
  if (cacheable) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({r, j});
    if (it != cache.end()) return it->second;
  }

  // Expansion point is the hanging node at (j/r, 0); h = 1.
  const Rational xc = make_rational(j, r);
  const Rational local[6][2] = {{0, -1}, {1, -1}, {0, 0}, {1, 0}, {0, 1}, {1, 1}};
  DerivationProblem prob;
  prob.dim = 2;
  prob.kappa = kappa;
  prob.K = K;
  prob.u_order = 4;
  for (const auto& p : local) prob.u_points.push_back({Rational(p[0] - xc), p[1]});
  prob.u_points.push_back({0, 0});
  prob.f_points = prob.u_points;
  prob.dropped = {{4, 0}, {0, 4}};
  // Mirror symmetry across the edge and source support on the edge.
  prob.constraints.push_back(equal_constraint(0, 4));
  prob.constraints.push_back(equal_constraint(1, 5));
  for (int k : {0, 1, 4, 5}) prob.constraints.push_back(fix_constraint(7 + k, 0));

  const DerivationResult res = derive_stencil(prob);
  LocalStencil<Rational> s{res.alpha, res.beta};
  if (!has_sign_property(s, 6)) {
    throw Error(ErrorKind::SignViolation,
                "derived hanging stencil for r=" + std::to_string(r) + ", j=" + std::to_string(j) +
                    " lacks the sign property");
  }
  if (cacheable) {
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::make_pair(r, j), s);
  }
  return s;
}

LocalStencil<Rational> derive_border_1d(const Rational& h1, const Rational& h2, const Rational& kappa,
                                        const Rational& K) {
  DerivationProblem prob;
  prob.dim = 1;
  prob.kappa = kappa;
  prob.K = K;
  prob.u_order = 4;
  prob.u_points = {{Rational(-h1), 0}, {0, 0}, {h2, 0}};
  prob.f_points = prob.u_points;
  const DerivationResult res = derive_stencil(prob);
  return {res.alpha, res.beta};
}

LocalStencil<Rational> derive_border_2d(const Rational& h1, const Rational& h2, const Rational& hy) {
  DerivationProblem prob;
  prob.dim = 2;
  prob.u_order = 4;
  const Rational xs[3] = {Rational(-h1), 0, h2};
  const Rational ys[3] = {Rational(-hy), 0, hy};
  for (const auto& y : ys)
    for (const auto& x : xs) prob.u_points.push_back({x, y});
  prob.f_points = {{0, Rational(-hy)}, {Rational(-h1), 0}, {0, 0}, {h2, 0}, {0, hy}};
  // Symmetry in y.
  for (int k = 0; k < 3; ++k) prob.constraints.push_back(equal_constraint(k, 6 + k));
  prob.constraints.push_back(equal_constraint(9, 13));
  const DerivationResult res = derive_stencil(prob);
  LocalStencil<Rational> s;
  s.alpha = res.alpha;
  s.beta.assign(9, Rational(0));
  s.beta[idx3(0, -1)] = res.beta[0];
  s.beta[idx3(-1, 0)] = res.beta[1];
  s.beta[idx3(0, 0)] = res.beta[2];
  s.beta[idx3(1, 0)] = res.beta[3];
  s.beta[idx3(0, 1)] = res.beta[4];
  return s;
}

}  // namespace twogrid
