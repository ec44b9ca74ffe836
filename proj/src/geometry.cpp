#include "twogrid/geometry.hpp"

#include <algorithm>

#include "twogrid/errors.hpp"

namespace twogrid {

LevelSet LevelSet::from_values(std::string name, ValueFn phi) {
  LevelSet ls;
  ls.name_ = std::move(name);
  ls.value_ = std::move(phi);
  return ls;
}

Jet LevelSet::jet(Point p) const {
  if (jet_) return jet_(Jet::var_x(p.x), Jet::var_y(p.y));
  // Fourth-order central differences.
  const double d = 1e-3;
  auto f = [&](double dx, double dy) { return value_(p.x + dx, p.y + dy); };
  Jet j(f(0, 0));
  j.g[0] = (-f(2 * d, 0) + 8 * f(d, 0) - 8 * f(-d, 0) + f(-2 * d, 0)) / (12 * d);
  j.g[1] = (-f(0, 2 * d) + 8 * f(0, d) - 8 * f(0, -d) + f(0, -2 * d)) / (12 * d);
  j.H[0] = (-f(2 * d, 0) + 16 * f(d, 0) - 30 * j.v + 16 * f(-d, 0) - f(-2 * d, 0)) / (12 * d * d);
  j.H[2] = (-f(0, 2 * d) + 16 * f(0, d) - 30 * j.v + 16 * f(0, -d) - f(0, -2 * d)) / (12 * d * d);
  j.H[1] = (f(d, d) - f(d, -d) - f(-d, d) + f(-d, -d)) / (4 * d * d);
  return j;
}

Point LevelSet::gradient(Point p) const {
  const Jet j = jet(p);
  return {j.g[0], j.g[1]};
}

namespace {

double curvature_of(const Jet& j) {
  const double px = j.g[0], py = j.g[1];
  const double g2 = px * px + py * py;
  return (j.H[0] * py * py - 2.0 * px * py * j.H[1] + j.H[2] * px * px) / (g2 * std::sqrt(g2));
}

}  // namespace

double LevelSet::curvature(Point p) const { return curvature_of(jet(p)); }

std::vector<double> LevelSet::sample(const std::vector<Point>& pts) const {
  std::vector<double> out(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) out[k] = (*this)(pts[k]);
  return out;
}

double eval(const LevelSet& ls, Point p) { return ls(p); }

InterfaceFrame project_to_interface(const LevelSet& ls, Point p, double tol) {
  constexpr int kMaxIter = 50;
  Point X = p;
  int it = 0;

  // Gradient Newton onto the zero set.
  for (; it < kMaxIter; ++it) {
    const Jet j = ls.jet(X);
    const double g2 = j.g[0] * j.g[0] + j.g[1] * j.g[1];
    if (!(g2 > 0.0)) throw Error(ErrorKind::NonConvergence, "vanishing gradient during projection");
    if (std::abs(j.v) <= tol) break;
    Point step{-j.v * j.g[0] / g2, -j.v * j.g[1] / g2};
    for (int k = 0; k < 30 && std::abs(ls(X + step)) > std::abs(j.v); ++k) step = 0.5 * step;
    X = X + step;
  }

  // Newton on F = (phi, (X - p) x grad phi) to make the foot orthogonal.
  auto merit = [&](Point Y, double& f1, double& f2) {
    const Jet j = ls.jet(Y);
    const double gn = std::hypot(j.g[0], j.g[1]);
    f1 = j.v;
    f2 = cross(Y - p, {j.g[0], j.g[1]}) / gn;
    return f1 * f1 + f2 * f2;
  };
  bool converged = false;
  for (; it < kMaxIter; ++it) {
    const Jet j = ls.jet(X);
    const double gn = std::hypot(j.g[0], j.g[1]);
    const Point d = X - p;
    const double F1 = j.v;
    const double F2 = d.x * j.g[1] - d.y * j.g[0];
    if (std::abs(F1) <= tol && std::abs(F2) <= tol * gn) {
      converged = true;
      break;
    }
    const double a11 = j.g[0], a12 = j.g[1];
    const double a21 = j.g[1] + d.x * j.H[1] - d.y * j.H[0];
    const double a22 = -j.g[0] + d.x * j.H[2] - d.y * j.H[1];
    const double det = a11 * a22 - a12 * a21;
    if (!(std::abs(det) > 0.0)) throw Error(ErrorKind::NonConvergence, "singular projection Jacobian");
    Point step{-(a22 * F1 - a12 * F2) / det, -(-a21 * F1 + a11 * F2) / det};
    double f1, f2;
    const double m0 = merit(X, f1, f2);
    for (int k = 0; k < 30 && merit(X + step, f1, f2) > m0; ++k) step = 0.5 * step;
    X = X + step;
  }
  if (!converged) {
    throw Error(ErrorKind::NonConvergence,
                "interface projection from (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
  }

  const Jet j = ls.jet(X);
  const double gn = std::hypot(j.g[0], j.g[1]);
  InterfaceFrame fr;
  fr.foot = X;
  fr.normal = {j.g[0] / gn, j.g[1] / gn};
  fr.tangent = {-fr.normal.y, fr.normal.x};
  fr.curvature = curvature_of(j);
  return fr;
}

LevelSet circle_level_set(Point c, double R) {
  return LevelSet::analytic("circle", [c, R](auto x, auto y) {
    using std::sqrt;
    auto dx = x - c.x;
    auto dy = y - c.y;
    return sqrt(dx * dx + dy * dy) - R;
  });
}

LevelSet flower_level_set(double r0, double amp, int k, bool near_distance) {
  const double kk = k;
  return LevelSet::analytic("flower", [=](auto x, auto y) {
    using std::atan2;
    using std::cos;
    using std::sin;
    using std::sqrt;
    auto r = sqrt(x * x + y * y);
    auto th = atan2(y, x);
    auto R = r0 + amp * sin(kk * th);
    if (!near_distance) return r - R;
    auto dR = amp * kk * cos(kk * th);
    return (r - R) * R / sqrt(R * R + dR * dR);
  });
}

}  // namespace twogrid
