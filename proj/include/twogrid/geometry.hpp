#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "twogrid/jet.hpp"

namespace twogrid {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }

// Which subdomain a point belongs to. Omega^- = {phi < 0}; points on the
// interface are assigned to the minus side.
enum class Side { Minus, Plus };
inline Side side_of(double phi) { return phi > 0.0 ? Side::Plus : Side::Minus; }

// Implicit interface {phi = 0}. phi < 0 inside, phi > 0 outside.
class LevelSet {
 public:
  using ValueFn = std::function<double(double, double)>;
  using JetFn = std::function<Jet(const Jet&, const Jet&)>;

  LevelSet() = default;

  // Build from a generic callable usable with both double and Jet arguments;
  // derivatives are then exact.
  template <class F>
  static LevelSet analytic(std::string name, F f) {
    LevelSet ls;
    ls.name_ = std::move(name);
    ls.value_ = [f](double x, double y) { return static_cast<double>(f(x, y)); };
    ls.jet_ = [f](const Jet& x, const Jet& y) { return Jet(f(x, y)); };
    return ls;
  }

  // Values only; derivatives by central differences.
  static LevelSet from_values(std::string name, ValueFn phi);

  const std::string& name() const { return name_; }
  bool valid() const { return static_cast<bool>(value_); }

  double operator()(Point p) const { return value_(p.x, p.y); }
  Jet jet(Point p) const;
  Point gradient(Point p) const;
  double curvature(Point p) const;

  // Sampled values phi(p_k) for a list of nodes.
  std::vector<double> sample(const std::vector<Point>& pts) const;

 private:
  std::string name_;
  ValueFn value_;
  JetFn jet_;
};

struct InterfaceFrame {
  Point foot;
  Point normal;   // unit, points toward phi > 0
  Point tangent;  // normal rotated by +90 degrees
  double curvature = 0.0;  // div(normal); 1/R for a circle of radius R
};

double eval(const LevelSet& ls, Point p);

// Orthogonal projection of p onto {phi = 0} with the local frame there.
// Throws NonConvergence after 50 Newton iterations.
InterfaceFrame project_to_interface(const LevelSet& ls, Point p, double tol = 1e-12);

// Benchmark level sets.
LevelSet circle_level_set(Point center, double radius);
// r(theta) = r0 + amp sin(k theta). The near-distance form divides by the
// gradient norm of r - r(theta) evaluated on the curve.
LevelSet flower_level_set(double r0, double amp, int k, bool near_distance = true);

}  // namespace twogrid
