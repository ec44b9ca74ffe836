#include <doctest.h>

#include <cmath>
#include <functional>

#include "twogrid/errors.hpp"
#include "twogrid/harness.hpp"
#include "twogrid/iim.hpp"

using namespace twogrid;

namespace {

using JetFn = std::function<Jet(const Jet&, const Jet&)>;

Jet at(const JetFn& u, Point p) { return u(Jet::var_x(p.x), Jet::var_y(p.y)); }

// Jump data with exact tangential derivatives for u- / u+ given as jets.
// The tangent is the normal turned by +90 degrees, so dt/ds = -c n and
// dn/ds = c t with c the curvature.
JumpData jumps_from(const JetFn& um, const JetFn& up, double km, double kp) {
  JumpData j;
  j.w = [=](Point p) { return at(up, p).v - at(um, p).v; };
  j.derivatives = [=](const InterfaceFrame& fr) {
    const Jet a = at(um, fr.foot), b = at(up, fr.foot);
    const Point n = fr.normal, t = fr.tangent;
    const double c = fr.curvature;
    auto grad = [](const Jet& u, Point d) { return u.dx() * d.x + u.dy() * d.y; };
    auto hess = [](const Jet& u, Point d, Point e) {
      return u.dxx() * d.x * e.x + u.dxy() * (d.x * e.y + d.y * e.x) + u.dyy() * d.y * e.y;
    };
    JumpDerivatives d;
    d.w = b.v - a.v;
    d.w_s = grad(b, t) - grad(a, t);
    d.w_ss = hess(b, t, t) - hess(a, t, t) - c * (grad(b, n) - grad(a, n));
    d.v = kp * grad(b, n) - km * grad(a, n);
    d.v_s = kp * (hess(b, t, n) + c * grad(b, t)) - km * (hess(a, t, n) + c * grad(a, t));
    return d;
  };
  j.v = [=](Point p) {
    const Point g = {p.x, p.y};
    const double r = norm(g);
    const Point n = (1.0 / r) * g;
    const Jet a = at(um, p), b = at(up, p);
    return kp * (b.dx() * n.x + b.dy() * n.y) - km * (a.dx() * n.x + a.dy() * n.y);
  };
  return j;
}

CompositeGrid circle_grid(int N, int r) {
  GridParams gp;
  gp.N = N;
  gp.r = r;
  gp.lambda = 2.0;
  gp.domain = {-1, 1, -1, 1};
  return build_tube_two_grid_2d(gp, circle_level_set({0, 0}, 0.5));
}

double stencil_residual(const IrregularStencil& s, const std::vector<double>& u, double f) {
  double r = -f - s.correction;
  for (std::size_t k = 0; k < s.nodes.size(); ++k) r += s.alpha[k] * u[static_cast<std::size_t>(s.nodes[k])];
  return r;
}

}  // namespace

TEST_SUITE("iim") {
  TEST_CASE("1D coefficients reduce to the three-point scheme for equal kappa") {
    const double k = 3.0, h = 0.01, xj = 0.5, alpha = 0.503;
    JumpData jd;
    jd.C = 2.0;
    auto [a, b] = iim_1d_irregular(k, k, alpha, xj, h, jd);
    for (const auto* s : {&a, &b}) {
      CHECK(s->alpha[0] == doctest::Approx(k / (h * h)));
      CHECK(s->alpha[1] == doctest::Approx(-2 * k / (h * h)));
      CHECK(s->alpha[2] == doctest::Approx(k / (h * h)));
      CHECK(std::abs(s->alpha[0] + s->alpha[1] + s->alpha[2]) < 1e-9 * k / (h * h));
    }
    CHECK(a.correction == doctest::Approx(k / (h * h) * (xj + h - alpha) * jd.C / k));
    CHECK(b.correction == doctest::Approx(k / (h * h) * (alpha - xj) * jd.C / k));
  }

  TEST_CASE("1D jump in u is carried to the right-hand side") {
    // u = x on the left, x + w on the right, equal kappa, f = 0
    const double k = 2.0, h = 0.02, xj = 0.4, alpha = 0.41, w = 0.7;
    JumpData jd;
    jd.Cbar = w * (k + k) / 2;
    auto [a, b] = iim_1d_irregular(k, k, alpha, xj, h, jd);
    auto u = [&](double x) { return x <= alpha ? x : x + w; };
    const double ra = a.alpha[0] * u(xj - h) + a.alpha[1] * u(xj) + a.alpha[2] * u(xj + h) - a.correction;
    const double rb = b.alpha[0] * u(xj) + b.alpha[1] * u(xj + h) + b.alpha[2] * u(xj + 2 * h) - b.correction;
    CHECK(std::abs(ra) < 1e-9);
    CHECK(std::abs(rb) < 1e-9);
  }

  TEST_CASE("1D truncation error is first order at both irregular points") {
    const double km = 4, kp = 50;
    double prev = 0.0;
    std::vector<double> slopes;
    for (double h : {1.0 / 80, 1.0 / 160, 1.0 / 320, 1.0 / 640}) {
      const double xj = 0.5, alpha = xj + 0.3 * h;
      auto u = [&](double x) {
        return x <= alpha ? std::pow(x, 4) / km : std::pow(x, 4) / kp + (1 / km - 1 / kp) * std::pow(alpha, 4);
      };
      auto f = [](double x) { return 12 * x * x; };
      auto [a, b] = iim_1d_irregular(km, kp, alpha, xj, h, JumpData{});
      const double ra = a.alpha[0] * u(xj - h) + a.alpha[1] * u(xj) + a.alpha[2] * u(xj + h) - f(xj) - a.correction;
      const double rb =
          b.alpha[0] * u(xj) + b.alpha[1] * u(xj + h) + b.alpha[2] * u(xj + 2 * h) - f(xj + h) - b.correction;
      const double r = std::max(std::abs(ra), std::abs(rb));
      if (prev > 0) slopes.push_back(std::log2(prev / r));
      prev = r;
    }
    for (double s : slopes) CHECK(s >= 0.9);
  }

  TEST_CASE("singular-source stencil with zero jumps is the plain five-point Laplacian") {
    const auto g = circle_grid(20, 2);
    const LevelSet& ls = g.level_set;
    SideField f = [](Point, Side) { return 0.0; };
    JumpData zero;
    int seen = 0;
    for (const auto& n : g.nodes) {
      if (n.tag != NodeTag::FineIrregular) continue;
      const auto s = singular_source_stencil_2d(g, n.id, ls, 1.0, zero, f);
      CHECK(s.correction == 0.0);
      REQUIRE(s.alpha.size() == 5);
      CHECK(s.alpha[0] == doctest::Approx(-4 / (g.h_f * g.h_f)));
      for (int k = 1; k < 5; ++k) CHECK(s.alpha[k] == doctest::Approx(1 / (g.h_f * g.h_f)));
      ++seen;
    }
    CHECK(seen > 0);
  }

  TEST_CASE("singular-source correction is exact for piecewise quadratics") {
    // Linear part of the line example plus quadratic terms on both sides.
    const JetFn um = [](const Jet& x, const Jet& y) { return x * x + y - 0.2 * x; };
    const JetFn up = [](const Jet& x, const Jet& y) { return 3.0 * x - y * y + x * y + 0.5; };
    const JumpData jd = jumps_from(um, up, 1.0, 1.0);
    SideField f = [](Point, Side s) { return s == Side::Minus ? 2.0 : -2.0; };
    for (int N : {20, 40}) {
      const auto g = circle_grid(N, 2);
      std::vector<double> u(g.size());
      for (const auto& n : g.nodes) u[n.id] = at(g.side(n.id) == Side::Minus ? um : up, n.p).v;
      for (const auto& n : g.nodes) {
        if (n.tag != NodeTag::FineIrregular) continue;
        const auto s = singular_source_stencil_2d(g, n.id, g.level_set, 1.0, jd, f);
        const double res = stencil_residual(s, u, f(n.p, g.side(n.id)));
        CHECK(std::abs(res) < 1e-7 / (g.h_f * g.h_f) * 1e-3);
      }
    }
  }

  TEST_CASE("equal kappa makes the discontinuous stencil the singular-source one") {
    const auto g = circle_grid(20, 2);
    const JetFn um = [](const Jet& x, const Jet& y) { return x * y; };
    const JetFn up = [](const Jet& x, const Jet& y) { return x + y * y; };
    const JumpData jd = jumps_from(um, up, 2.0, 2.0);
    SideField f = [](Point, Side s) { return s == Side::Minus ? 0.0 : 4.0; };
    for (const auto& n : g.nodes) {
      if (n.tag != NodeTag::FineIrregular) continue;
      const auto a = singular_source_stencil_2d(g, n.id, g.level_set, 2.0, jd, f);
      const auto b = iim_discontinuous_stencil_2d(g, n.id, g.level_set, 2.0, 2.0, jd, f);
      CHECK(a.alpha == b.alpha);
      CHECK(std::abs(a.correction - b.correction) <= 1e-12 * (1 + std::abs(a.correction)));
    }
  }

  TEST_CASE("corrections are linear in the jump data") {
    const auto g = circle_grid(20, 2);
    SideField f = [](Point, Side) { return 0.0; };
    JumpData one, two;
    one.w = [](Point p) { return p.x * p.y; };
    one.v = [](Point p) { return 1.0 + p.x; };
    two.w = [](Point p) { return 2 * (p.x * p.y); };
    two.v = [](Point p) { return 2 * (1.0 + p.x); };
    for (const auto& n : g.nodes) {
      if (n.tag != NodeTag::FineIrregular) continue;
      const auto a = singular_source_stencil_2d(g, n.id, g.level_set, 1.0, one, f);
      const auto b = singular_source_stencil_2d(g, n.id, g.level_set, 1.0, two, f);
      CHECK(b.correction == 2 * a.correction);
      const auto c = iim_discontinuous_stencil_2d(g, n.id, g.level_set, 1.0, 5.0, one, f);
      const auto d = iim_discontinuous_stencil_2d(g, n.id, g.level_set, 1.0, 5.0, two, f);
      CHECK(d.correction == 2 * c.correction);
      CHECK(c.alpha == d.alpha);
    }
  }

  TEST_CASE("discontinuous-coefficient stencils keep the sign property") {
    for (auto [km, kp] : {std::pair{50.0, 1.0}, {1.0, 10.0}}) {
      const ProblemSpec p = make_problem("flower", {km, kp, 0});
      CaseConfig c;
      c.N = 80;
      c.r = 2;
      const auto g = build_grid(p, c);
      for (const auto& n : g.nodes) {
        if (n.tag != NodeTag::FineIrregular) continue;
        const auto s = iim_discontinuous_stencil_2d(g, n.id, g.level_set, km, kp, p.jumps, p.f);
        for (std::size_t k = 0; k < s.nodes.size(); ++k) {
          if (s.nodes[k] == n.id) {
            CHECK(s.alpha[k] < 0);
          } else {
            CHECK(s.alpha[k] >= 0);
          }
        }
      }
    }
  }

  TEST_CASE("discontinuous-coefficient truncation error is first order") {
    auto fit = [](const std::vector<double>& x, const std::vector<double>& y) {
      double mx = 0, my = 0;
      for (std::size_t k = 0; k < x.size(); ++k) mx += x[k] / x.size(), my += y[k] / y.size();
      double num = 0, den = 0;
      for (std::size_t k = 0; k < x.size(); ++k) num += (x[k] - mx) * (y[k] - my), den += (x[k] - mx) * (x[k] - mx);
      return num / den;
    };
    for (auto [km, kp] : {std::pair{1.0, 10.0}, {50.0, 1.0}}) {
      CAPTURE(km);
      const ProblemSpec p = make_problem("flower", {km, kp, 0});
      std::vector<double> hs, worst, mean;
      for (int N : {80, 160, 320, 640}) {
        CaseConfig c;
        c.N = N;
        c.r = 2;
        const auto g = build_grid(p, c);
        const auto u = exact_values(p, g);
        double w = 0.0, m = 0.0;
        int cnt = 0;
        for (const auto& n : g.nodes) {
          if (n.tag != NodeTag::FineIrregular) continue;
          const auto s = iim_discontinuous_stencil_2d(g, n.id, g.level_set, km, kp, p.jumps, p.f);
          const double r = std::abs(stencil_residual(s, u, p.f(n.p, g.side(n.id))));
          w = std::max(w, r);
          m += r;
          ++cnt;
        }
        hs.push_back(std::log(g.h_f));
        worst.push_back(std::log(w));
        mean.push_back(std::log(m / cnt));
      }
      CHECK(fit(hs, mean) >= 0.9);
      // the worst node is noisier; (1,10) fits about 0.87 here
      CHECK(fit(hs, worst) >= 0.8);
    }
  }

  TEST_CASE("non-irregular nodes are rejected") {
    const auto g = circle_grid(20, 2);
    SideField f = [](Point, Side) { return 0.0; };
    for (const auto& n : g.nodes) {
      if (n.tag != NodeTag::FineRegular) continue;
      CHECK_THROWS_AS(singular_source_stencil_2d(g, n.id, g.level_set, 1.0, JumpData{}, f), Error);
      break;
    }
  }
}
