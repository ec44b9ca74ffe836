#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "twogrid/errors.hpp"
#include "twogrid/geometry.hpp"

using namespace twogrid;

namespace {

constexpr double kPi = std::numbers::pi;

Point flower_point(double t) {
  const double r = 0.5 + 0.1 * std::sin(8 * t);
  return {r * std::cos(t), r * std::sin(t)};
}

// Nearest point of the parametrised flower curve: dense sweep, then a
// ternary search on the bracketing interval.
Point nearest_on_flower(Point p) {
  const int n = 1'000'000;
  double best_t = 0.0, best_d = 1e300;
  for (int k = 0; k < n; ++k) {
    const double t = 2 * kPi * k / n;
    const double d = norm(flower_point(t) - p);
    if (d < best_d) {
      best_d = d;
      best_t = t;
    }
  }
  double lo = best_t - 2 * kPi / n, hi = best_t + 2 * kPi / n;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (norm(flower_point(m1) - p) < norm(flower_point(m2) - p)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return flower_point(0.5 * (lo + hi));
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("circle level set values") {
    const LevelSet ls = circle_level_set({0, 0}, 0.5);
    CHECK(eval(ls, {0, 0}) == doctest::Approx(-0.5));
    CHECK(std::abs(eval(ls, {0.5, 0})) < 1e-15);
    CHECK(eval(ls, {0.9, 0}) > 0);
  }

  TEST_CASE("flower level set is positive outside the petal") {
    const LevelSet ls = flower_level_set(0.5, 0.1, 8);
    CHECK(eval(ls, {0.6, 0}) > 0);
    CHECK(eval(ls, {0.4, 0}) < 0);
  }

  TEST_CASE("circle projection examples") {
    const LevelSet ls = circle_level_set({0, 0}, 0.5);
    auto fr = project_to_interface(ls, {0.4, 0});
    CHECK(fr.foot.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(fr.foot.y) < 1e-12);
    CHECK(fr.normal.x == doctest::Approx(1.0));
    CHECK(std::abs(fr.normal.y) < 1e-12);
    CHECK(fr.curvature == doctest::Approx(2.0).epsilon(1e-10));

    fr = project_to_interface(ls, {0, 0.7});
    CHECK(std::abs(fr.foot.x) < 1e-12);
    CHECK(fr.foot.y == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fr.normal.y == doctest::Approx(1.0));
  }

  TEST_CASE("circle foot is the radial projection and curvature is 1/R") {
    const LevelSet ls = circle_level_set({0, 0}, 0.5);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> rad(0.1, 0.9), ang(0, 2 * kPi);
    for (int k = 0; k < 100; ++k) {
      const double r = rad(rng), t = ang(rng);
      const Point p{r * std::cos(t), r * std::sin(t)};
      const auto fr = project_to_interface(ls, p);
      const Point want = (0.5 / norm(p)) * p;
      CHECK(norm(fr.foot - want) < 1e-10);
      CHECK(std::abs(fr.curvature - 2.0) < 1e-8);
      CHECK(std::abs(norm(fr.normal) - 1.0) < 1e-14);
      CHECK(std::abs(norm(fr.tangent) - 1.0) < 1e-14);
      CHECK(std::abs(dot(fr.normal, fr.tangent)) < 1e-14);
    }
  }

  TEST_CASE("flower projection agrees with a parametric sweep") {
    const LevelSet ls = flower_level_set(0.5, 0.1, 8);
    const Point p{0.55, 0.05};
    const auto fr = project_to_interface(ls, p);
    CHECK(std::abs(eval(ls, fr.foot)) < 1e-12);
    const Point want = nearest_on_flower(p);
    CHECK(norm(fr.foot - want) < 1e-8);
  }

  TEST_CASE("flower curvature matches the parametric formula") {
    const LevelSet ls = flower_level_set(0.5, 0.1, 8);
    for (double t : {0.1, 0.7, 1.3, 2.9, 4.4}) {
      const double r = 0.5 + 0.1 * std::sin(8 * t), r1 = 0.8 * std::cos(8 * t), r2 = -6.4 * std::sin(8 * t);
      const double want = (r * r + 2 * r1 * r1 - r * r2) / std::pow(r * r + r1 * r1, 1.5);
      const auto fr = project_to_interface(ls, flower_point(t));
      CHECK(fr.curvature == doctest::Approx(want).epsilon(1e-6));
    }
  }

  TEST_CASE("values-only level set differences its derivatives") {
    const LevelSet ls = LevelSet::from_values("circle", [](double x, double y) { return std::hypot(x, y) - 0.5; });
    const auto fr = project_to_interface(ls, {0.3, 0.3});
    CHECK(fr.curvature == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(norm(fr.foot) == doctest::Approx(0.5).epsilon(1e-10));
  }

  TEST_CASE("sampled values match direct evaluation") {
    const LevelSet ls = flower_level_set(0.5, 0.1, 8);
    std::vector<Point> pts = {{0.1, 0.2}, {-0.7, 0.3}, {0.0, -0.9}};
    const auto s = ls.sample(pts);
    for (std::size_t k = 0; k < pts.size(); ++k) CHECK(std::abs(s[k] - ls(pts[k])) <= 1e-14);
  }
}
