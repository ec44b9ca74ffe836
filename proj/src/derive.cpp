#include "twogrid/derive.hpp"

#include <sstream>

#include "twogrid/errors.hpp"

namespace twogrid {

Rational parse_rational(const std::string& s) {
  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rational q(s);
    q.canonicalize();
    return q;
  }
  const std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
  mpz_class den = 1;
  for (std::size_t k = 0; k < fp.size(); ++k) den *= 10;
  const bool neg = !ip.empty() && ip[0] == '-';
  mpz_class whole(ip.empty() || ip == "-" ? "0" : ip);
  mpz_class frac(fp.empty() ? "0" : fp);
  Rational q(whole * den + (neg ? -frac : frac), den);
  q.canonicalize();
  return q;
}

LinearConstraint equal_constraint(int i, int j) {
  LinearConstraint c;
  c.terms = {{i, Rational(1)}, {j, Rational(-1)}};
  return c;
}

LinearConstraint fix_constraint(int i, const Rational& value) {
  LinearConstraint c;
  c.terms = {{i, Rational(1)}};
  c.rhs = value;
  return c;
}

std::vector<int> rref(std::vector<std::vector<Rational>>& rows, int ncols) {
  std::vector<int> pivots;
  std::size_t lead = 0;
  for (int col = 0; col < ncols && lead < rows.size(); ++col) {
    std::size_t piv = lead;
    while (piv < rows.size() && sgn(rows[piv][col]) == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[lead]);
    const Rational inv = 1 / rows[lead][col];
    for (auto& v : rows[lead]) v *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == lead || sgn(rows[i][col]) == 0) continue;
      const Rational f = rows[i][col];
      for (std::size_t k = 0; k < rows[i].size(); ++k) rows[i][k] -= f * rows[lead][k];
    }
    pivots.push_back(col);
    ++lead;
  }
  return pivots;
}

namespace {

Rational power(const Rational& x, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

Rational factorial(int k) {
  Rational r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// Solution of an augmented system: particular solution (free variables 0)
// and a null-space basis.
struct Solution {
  std::vector<Rational> x;
  std::vector<std::vector<Rational>> null;
  int rank = 0;
};

Solution solve_rational(std::vector<std::vector<Rational>> rows, int n) {
  const std::vector<int> piv = rref(rows, n);
  for (std::size_t i = piv.size(); i < rows.size(); ++i) {
    if (sgn(rows[i][n]) != 0) throw Error(ErrorKind::InconsistentSystem, "stencil conditions have no solution");
  }
  Solution s;
  s.rank = static_cast<int>(piv.size());
  s.x.assign(n, Rational(0));
  std::vector<bool> is_pivot(n, false);
  for (std::size_t i = 0; i < piv.size(); ++i) {
    s.x[piv[i]] = rows[i][n];
    is_pivot[piv[i]] = true;
  }
  for (int f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(n, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -rows[i][f];
    s.null.push_back(std::move(v));
  }
  return s;
}

}  // namespace

DerivationResult derive_stencil(const DerivationProblem& prob) {
  const int nu = static_cast<int>(prob.u_points.size());
  const int nf = static_cast<int>(prob.f_points.size());
  const int n = nu + nf;
  if (n == 0 || nf == 0) throw Error(ErrorKind::BadParams, "derivation needs u and f points");

  std::vector<std::pair<int, int>> monos;
  for (int deg = 0; deg <= prob.u_order; ++deg) {
    for (int k2 = 0; k2 <= (prob.dim == 1 ? 0 : deg); ++k2) monos.emplace_back(deg - k2, k2);
  }
  auto mono_index = [&](int k1, int k2) {
    for (std::size_t i = 0; i < monos.size(); ++i)
      if (monos[i].first == k1 && monos[i].second == k2) return static_cast<int>(i);
    return -1;
  };

  std::vector<std::vector<Rational>> A(monos.size(), std::vector<Rational>(n + 1, Rational(0)));
  for (std::size_t m = 0; m < monos.size(); ++m) {
    const auto [k1, k2] = monos[m];
    const Rational denom = factorial(k1) * factorial(k2);
    for (int k = 0; k < nu; ++k) {
      A[m][k] = power(prob.u_points[k].dx, k1) * power(prob.u_points[k].dy, k2) / denom;
    }
  }
  const int f_order = prob.u_order - 2;
  for (int k = 0; k < nf; ++k) {
    const Offset& q = prob.f_points[k];
    for (int deg = 0; deg <= f_order; ++deg) {
      for (int m2 = 0; m2 <= (prob.dim == 1 ? 0 : deg); ++m2) {
        const int m1 = deg - m2;
        const Rational w = power(q.dx, m1) * power(q.dy, m2) / (factorial(m1) * factorial(m2));
        const int ixx = mono_index(m1 + 2, m2);
        if (ixx >= 0) A[ixx][nu + k] -= prob.kappa * w;
        if (prob.dim == 2) {
          const int iyy = mono_index(m1, m2 + 2);
          if (iyy >= 0) A[iyy][nu + k] -= prob.kappa * w;
        }
        const int i0 = mono_index(m1, m2);
        if (i0 >= 0 && sgn(prob.K) != 0) A[i0][nu + k] -= prob.K * w;
      }
    }
  }

  std::vector<std::vector<Rational>> rows;
  for (std::size_t m = 0; m < monos.size(); ++m) {
    bool drop = false;
    for (const auto& d : prob.dropped) drop = drop || (d == monos[m]);
    if (!drop) rows.push_back(std::move(A[m]));
  }
  {
    std::vector<Rational> sb(n + 1, Rational(0));
    for (int k = 0; k < nf; ++k) sb[nu + k] = 1;
    sb[n] = 1;
    rows.push_back(std::move(sb));
  }
  for (const auto& c : prob.constraints) {
    std::vector<Rational> row(n + 1, Rational(0));
    for (const auto& [idx, coef] : c.terms) {
      if (idx < 0 || idx >= n) throw Error(ErrorKind::BadParams, "constraint index out of range");
      row[idx] += coef;
    }
    row[n] = c.rhs;
    rows.push_back(std::move(row));
  }

  Solution s = solve_rational(rows, n);
  DerivationResult res;
  res.rank = s.rank;
  res.free_dims = static_cast<int>(s.null.size());

  std::vector<Rational> x = s.x;
  if (!s.null.empty()) {
    // Minimise sum beta^2 over x + N z: (Nb^T Nb) z = -Nb^T xb.
    const int t = static_cast<int>(s.null.size());
    std::vector<std::vector<Rational>> M(t, std::vector<Rational>(t + 1, Rational(0)));
    for (int a = 0; a < t; ++a) {
      for (int b = 0; b < t; ++b)
        for (int k = nu; k < n; ++k) M[a][b] += s.null[a][k] * s.null[b][k];
      for (int k = nu; k < n; ++k) M[a][t] -= s.null[a][k] * x[k];
    }
    const Solution z = solve_rational(M, t);
    for (int a = 0; a < t; ++a)
      for (int k = 0; k < n; ++k) x[k] += z.x[a] * s.null[a][k];
  }
  res.alpha.assign(x.begin(), x.begin() + nu);
  res.beta.assign(x.begin() + nu, x.end());
  return res;
}

}  // namespace twogrid
