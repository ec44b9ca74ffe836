#include "twogrid/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "twogrid/errors.hpp"

namespace twogrid {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Branch expression f(x, y) usable with double and Jet arguments.
template <class F>
std::function<Jet(Point)> branch(F f) {
  return [f](Point p) { return Jet(f(Jet::var_x(p.x), Jet::var_y(p.y))); };
}

std::function<Jet(Point, Side)> two_branches(std::function<Jet(Point)> minus, std::function<Jet(Point)> plus) {
  return [minus, plus](Point p, Side s) { return s == Side::Plus ? plus(p) : minus(p); };
}

SideField source_from_exact(const ProblemSpec& p) {
  auto exact = p.exact;
  const double km = p.kappa_minus, kp = p.kappa_plus, K = p.K, conv = p.convection;
  const int dim = p.dim;
  return [=](Point q, Side s) {
    const Jet u = exact(q, s);
    const double k = s == Side::Plus ? kp : km;
    const double lap = dim == 1 ? u.dxx() : u.laplacian();
    return k * lap + conv * u.dx() + K * u.v;
  };
}

double quad(const Jet& u, Point a, Point b) {
  return u.dxx() * a.x * b.x + u.dxy() * (a.x * b.y + a.y * b.x) + u.dyy() * a.y * b.y;
}

// w, v and their arclength derivatives from the two exact branches.
JumpData jumps_from_branches(const ProblemSpec& p) {
  JumpData j;
  auto exact = p.exact;
  const double km = p.kappa_minus, kp = p.kappa_plus;
  const LevelSet ls = p.level_set;
  j.w = [exact](Point q) { return exact(q, Side::Plus).v - exact(q, Side::Minus).v; };
  j.v = [exact, ls, km, kp](Point q) {
    const Point g = ls.gradient(q);
    const double gn = norm(g);
    const Point n{g.x / gn, g.y / gn};
    const Jet up = exact(q, Side::Plus), um = exact(q, Side::Minus);
    return kp * (up.dx() * n.x + up.dy() * n.y) - km * (um.dx() * n.x + um.dy() * n.y);
  };
  j.derivatives = [exact, km, kp](const InterfaceFrame& fr) {
    const Jet up = exact(fr.foot, Side::Plus), um = exact(fr.foot, Side::Minus);
    const Point n = fr.normal, t = fr.tangent;
    const double kc = fr.curvature;
    auto grad_dot = [](const Jet& u, Point a) { return u.dx() * a.x + u.dy() * a.y; };
    JumpDerivatives d;
    d.w = up.v - um.v;
    d.w_s = grad_dot(up, t) - grad_dot(um, t);
    d.w_ss = quad(up, t, t) - quad(um, t, t) - kc * (grad_dot(up, n) - grad_dot(um, n));
    d.v = kp * grad_dot(up, n) - km * grad_dot(um, n);
    d.v_s = kp * quad(up, t, n) - km * quad(um, t, n) + kc * (kp * grad_dot(up, t) - km * grad_dot(um, t));
    return d;
  };
  return j;
}

void set_boundary_from_exact(ProblemSpec& p) {
  auto exact = p.exact;
  const ProblemSpec copy = p;
  p.boundary = [exact, copy](Point q) { return exact(q, copy.side_at(q)).v; };
}

void finish(ProblemSpec& p) {
  if (!p.f) p.f = source_from_exact(p);
  set_boundary_from_exact(p);
  const double res = exact_pde_residual(p);
  if (!(res < 1e-7)) {
    throw Error(ErrorKind::BadParams,
                p.name + ": exact solution fails the PDE self-check (residual " + std::to_string(res) + ")");
  }
}

double pick(double v, double dflt) { return v > 0.0 ? v : dflt; }

ProblemSpec boundary_layer(const ProblemParams& pp) {
  ProblemSpec p;
  p.name = "boundary_layer_1d";
  p.dim = 1;
  p.epsilon = pick(pp.eps, 0.01);
  if (!(p.epsilon < 0.25)) throw Error(ErrorKind::BadParams, "boundary layer needs eps < 1/4");
  p.kappa_minus = p.kappa_plus = p.epsilon;
  p.convection = -1.0;
  p.K = 1.0;
  p.domain = {0.0, 1.0, 0.0, 0.0};
  p.recipe = GridRecipe::IntervalLayer;
  p.has_interface = false;
  // u = 1 + A e^{m1 x} + B e^{m2 (x - 1)}, eps m^2 - m + 1 = 0, u(0) = 1, u(1) = 3.
  const double e = p.epsilon, s = std::sqrt(1 - 4 * e);
  const double m1 = (1 - s) / (2 * e), m2 = (1 + s) / (2 * e);
  const double B = 2.0 / (1.0 - std::exp(m1 - m2));
  const double A = -B * std::exp(-m2);
  auto u = branch([=](auto x, auto) {
    using std::exp;
    return 1.0 + A * exp(m1 * x) + B * exp(m2 * (x - 1.0));
  });
  p.exact = two_branches(u, u);
  p.f = [](Point, Side) { return 1.0; };
  return p;
}

ProblemSpec piecewise_kappa(const ProblemParams& pp) {
  ProblemSpec p;
  p.name = "piecewise_kappa_1d";
  p.dim = 1;
  p.kappa_minus = pick(pp.kappa_minus, 4.0);
  p.kappa_plus = pick(pp.kappa_plus, 50.0);
  p.domain = {0.0, 1.0, 0.0, 0.0};
  p.recipe = GridRecipe::IntervalInterface;
  p.alpha = 17.0 / 30.0;
  const double km = p.kappa_minus, kp = p.kappa_plus, a4 = std::pow(p.alpha, 4);
  // Continuous solution with continuous flux 4x^3.
  auto um = branch([=](auto x, auto) { return x * x * x * x / km; });
  auto up = branch([=](auto x, auto) { return x * x * x * x / kp + (1.0 / km - 1.0 / kp) * a4; });
  p.exact = two_branches(um, up);
  p.f = [](Point q, Side) { return 12.0 * q.x * q.x; };
  p.jumps.C = 0.0;
  p.jumps.Cbar = 0.0;
  return p;
}

ProblemSpec line_interface(const ProblemParams&) {
  ProblemSpec p;
  p.name = "line_interface_2d";
  p.dim = 2;
  p.domain = {0.0, 1.0, 0.0, 1.0};
  p.recipe = GridRecipe::Line;
  p.alpha = 33.0 / 70.0;
  const double a = p.alpha;
  auto um = branch([=](auto x, auto y) {
    using std::sin;
    return x * (a - 1.0) + sin(kPi * y);
  });
  auto up = branch([=](auto x, auto y) {
    using std::sin;
    return a * (x - 1.0) + sin(kPi * y);
  });
  p.exact = two_branches(um, up);
  p.f = [](Point q, Side) { return -kPi * kPi * std::sin(kPi * q.y); };
  p.jumps.C = 1.0;  // [u_x] at x = alpha
  p.jumps.Cbar = 0.0;
  return p;
}

ProblemSpec peskin(const ProblemParams&) {
  ProblemSpec p;
  p.name = "peskin_circle";
  p.domain = {-1.0, 1.0, -1.0, 1.0};
  p.recipe = GridRecipe::Tube;
  p.level_set = circle_level_set({0.0, 0.0}, 0.5);
  auto um = branch([](auto, auto) { return 1.0; });
  auto up = branch([](auto x, auto y) {
    using std::log;
    using std::sqrt;
    return 1.0 + log(2.0 * sqrt(x * x + y * y));
  });
  p.exact = two_branches(um, up);
  p.f = [](Point, Side) { return 0.0; };
  p.jumps = jumps_from_branches(p);
  return p;
}

ProblemSpec flower(const ProblemParams& pp) {
  ProblemSpec p;
  p.name = "flower";
  p.kappa_minus = pick(pp.kappa_minus, 1.0);
  p.kappa_plus = pick(pp.kappa_plus, 10.0);
  p.domain = {-1.0, 1.0, -1.0, 1.0};
  p.recipe = GridRecipe::Tube;
  p.level_set = flower_level_set(0.5, 0.1, 8, true);
  const double km = p.kappa_minus, kp = p.kappa_plus;
  auto um = branch([=](auto x, auto y) { return (x * x + y * y) / km; });
  auto up = branch([=](auto x, auto y) {
    using std::log;
    using std::sqrt;
    auto r2 = x * x + y * y;
    return (r2 * r2 - 0.1 * log(2.0 * sqrt(r2))) / kp;
  });
  p.exact = two_branches(um, up);
  p.jumps = jumps_from_branches(p);
  return p;
}

ProblemSpec internal_layer(const ProblemParams& pp) {
  ProblemSpec p;
  p.name = "internal_layer";
  p.epsilon = pick(pp.eps, 0.01);
  p.domain = {-1.0, 1.0, -1.0, 1.0};
  p.recipe = GridRecipe::Tube;
  p.has_interface = false;
  p.level_set = LevelSet::analytic("layer", [](auto x, auto y) {
    using std::sqrt;
    return sqrt(x * x + y * y + 0.75) - 1.0;
  });
  const double e = p.epsilon;
  auto u = branch([=](auto x, auto y) {
    using std::atan;
    using std::sqrt;
    return atan((sqrt(x * x + y * y + 0.75) - 1.0) / e);
  });
  p.exact = two_branches(u, u);
  return p;
}

}  // namespace

Side ProblemSpec::side_at(Point q) const {
  if (!has_interface) return Side::Minus;
  if (recipe == GridRecipe::Tube) return side_of(level_set(q));
  return q.x <= alpha ? Side::Minus : Side::Plus;
}

double layer_source_printed(double x, double y, double eps) {
  const double r2 = x * x + y * y;
  const double s4 = r2 + 0.75;
  const double s3 = (std::sqrt(s4) - 1.0) / eps;
  const double s1 = (s3 * s3 + 1.0) * std::pow(s4, 1.5);
  const double s2 = (s3 * s3 + 1.0) * (s3 * s3 + 1.0) * s4;
  return (2.0 / ((s3 * s3 + 1.0) * std::sqrt(s4)) - 2.0 * r2 / s1 - 200.0 * r2 * s3 / s2) / eps;
}

std::vector<std::string> problem_names() {
  return {"boundary_layer_1d", "piecewise_kappa_1d", "line_interface_2d", "peskin_circle", "flower", "internal_layer"};
}

ProblemSpec make_problem(const std::string& name, const ProblemParams& pp) {
  if (pp.kappa_minus < 0 || pp.kappa_plus < 0 || pp.eps < 0)
    throw Error(ErrorKind::BadParams, "problem parameters must be positive");
  ProblemSpec p;
  if (name == "boundary_layer_1d") {
    p = boundary_layer(pp);
  } else if (name == "piecewise_kappa_1d") {
    p = piecewise_kappa(pp);
  } else if (name == "line_interface_2d") {
    p = line_interface(pp);
  } else if (name == "peskin_circle") {
    p = peskin(pp);
  } else if (name == "flower") {
    p = flower(pp);
  } else if (name == "internal_layer") {
    p = internal_layer(pp);
  } else {
    throw Error(ErrorKind::UnknownProblem, name);
  }
  finish(p);
  return p;
}

double exact_pde_residual(const ProblemSpec& p, int samples, unsigned seed) {
  if (!p.has_exact()) throw Error(ErrorKind::NoExactSolution, p.name);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(p.domain.a, p.domain.b), uy(p.domain.c, p.domain.d);
  const double d = p.epsilon > 0.0 ? 2e-2 * std::min(p.epsilon, 1.0) : 2e-3;
  double worst = 0.0;
  int done = 0;
  for (int attempt = 0; done < samples && attempt < 100 * samples; ++attempt) {
    Point q{ux(rng), p.dim == 2 ? uy(rng) : 0.0};
    if (p.has_interface) {
      if (p.recipe == GridRecipe::Tube) {
        if (std::abs(p.level_set(q)) < 0.05) continue;
      } else if (std::abs(q.x - p.alpha) < 0.05) {
        continue;
      }
    }
    if (q.x - 3 * d < p.domain.a || q.x + 3 * d > p.domain.b) continue;
    if (p.dim == 2 && (q.y - 3 * d < p.domain.c || q.y + 3 * d > p.domain.d)) continue;
    const Side s = p.side_at(q);
    auto u = [&](double dx, double dy) { return p.exact({q.x + dx, q.y + dy}, s).v; };
    const double u0 = u(0, 0);
    // sixth-order differences; sources are built from the jets, so these stay independent
    auto second = [&](double ex, double ey) {
      auto at = [&](int k) { return u(k * d * ex, k * d * ey); };
      return (2 * (at(3) + at(-3)) - 27 * (at(2) + at(-2)) + 270 * (at(1) + at(-1)) - 490 * u0) / (180 * d * d);
    };
    const double uxx = second(1, 0);
    const double uyy = p.dim == 2 ? second(0, 1) : 0.0;
    const double ux1 =
        (45 * (u(d, 0) - u(-d, 0)) - 9 * (u(2 * d, 0) - u(-2 * d, 0)) + (u(3 * d, 0) - u(-3 * d, 0))) / (60 * d);
    const double k = p.kappa(s);
    const double lhs_terms[3] = {k * (uxx + uyy), p.convection * ux1, p.K * u0};
    const double fv = p.f(q, s);
    const double res = lhs_terms[0] + lhs_terms[1] + lhs_terms[2] - fv;
    double scale = std::max(1.0, std::abs(fv));
    for (double t : lhs_terms) scale = std::max(scale, std::abs(t));
    worst = std::max(worst, std::abs(res) / scale);
    ++done;
  }
  return worst;
}

std::vector<double> exact_values(const ProblemSpec& p, const CompositeGrid& g) {
  if (!p.has_exact()) throw Error(ErrorKind::NoExactSolution, p.name);
  std::vector<double> out(g.size());
  for (const Node& n : g.nodes) out[n.id] = p.exact(n.p, g.side(n.id)).v;
  return out;
}

ErrorNorms exact_error(const ProblemSpec& p, const CompositeGrid& g, const std::vector<double>& values) {
  if (!p.has_exact()) throw Error(ErrorKind::NoExactSolution, p.name);
  if (values.size() != g.size()) throw Error(ErrorKind::BadParams, "solution length does not match the grid");
  ErrorNorms e;
  for (const Node& n : g.nodes) {
    if (n.tag == NodeTag::Boundary) continue;
    const double err = std::abs(values[n.id] - p.exact(n.p, g.side(n.id)).v);
    if (n.tag == NodeTag::CoarseRegular || n.tag == NodeTag::Border) {
      e.err_coarse = std::max(e.err_coarse, err);
    } else {
      e.err_fine = std::max(e.err_fine, err);
    }
  }
  return e;
}

}  // namespace twogrid
