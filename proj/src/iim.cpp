#include "twogrid/iim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "twogrid/errors.hpp"

namespace twogrid {

JumpDerivatives jump_derivatives(const JumpData& jumps, const LevelSet& ls, const InterfaceFrame& fr, double ds) {
  if (jumps.derivatives) return jumps.derivatives(fr);
  JumpDerivatives d;
  auto w = [&](Point p) { return jumps.w ? jumps.w(p) : 0.0; };
  auto v = [&](Point p) { return jumps.v ? jumps.v(p) : 0.0; };
  double ws[5], vs[5];
  for (int k = -2; k <= 2; ++k) {
    const Point p = k == 0 ? fr.foot : project_to_interface(ls, fr.foot + (k * ds) * fr.tangent).foot;
    ws[k + 2] = w(p);
    vs[k + 2] = v(p);
  }
  d.w = ws[2];
  d.v = vs[2];
  d.w_s = (-ws[4] + 8 * ws[3] - 8 * ws[1] + ws[0]) / (12 * ds);
  d.w_ss = (-ws[4] + 16 * ws[3] - 30 * ws[2] + 16 * ws[1] - ws[0]) / (12 * ds * ds);
  d.v_s = (-vs[4] + 8 * vs[3] - 8 * vs[1] + vs[0]) / (12 * ds);
  return d;
}

std::pair<IrregularStencil, IrregularStencil> iim_1d_irregular(double km, double kp, double alpha, double xj,
                                                               double hf, const JumpData& jumps, double K) {
  if (!(km > 0.0 && kp > 0.0)) throw Error(ErrorKind::BadParams, "kappa must be positive");
  if (!(xj <= alpha && alpha < xj + hf)) throw Error(ErrorKind::BadParams, "alpha must satisfy x_j <= alpha < x_{j+1}");
  const double jk = kp - km;
  const double xm = xj - hf, x1 = xj + hf, x2 = xj + 2 * hf;
  const double h2 = hf * hf;
  const double Dj = h2 + jk * (xm - alpha) * (xj - alpha) / (2 * km);
  const double Dj1 = h2 - jk * (x2 - alpha) * (x1 - alpha) / (2 * kp);
  if (std::abs(Dj) < 1e-3 * h2 || std::abs(Dj1) < 1e-3 * h2)
    throw Error(ErrorKind::DegenerateDenominator, "irregular-point denominator vanishes; refine h_f");

  IrregularStencil a, b;
  a.alpha = {(km - jk * (xj - alpha) / hf) / Dj, (-2 * km + jk * (xm - alpha) / hf) / Dj + K, kp / Dj};
  b.alpha = {km / Dj1, (-2 * kp + jk * (x2 - alpha) / hf) / Dj1 + K, (kp - jk * (x1 - alpha) / hf) / Dj1};
  a.correction = a.alpha[2] * (x1 - alpha) * jumps.C / kp;
  b.correction = b.alpha[0] * (alpha - xj) * jumps.C / km;
  // [u] moved to the right-hand side through the neighbour across alpha.
  const double wj = 2 * jumps.Cbar / (km + kp);
  a.correction += a.alpha[2] * wj;
  b.correction -= b.alpha[0] * wj;
  a.center_side = Side::Minus;
  b.center_side = Side::Plus;
  a.crossing = b.crossing = {alpha, 0.0};
  return {a, b};
}

bool sign_constrained_lsq(const std::vector<std::array<double, 6>>& columns, const std::array<double, 6>& b,
                          const std::vector<double>& target, int free_index, std::vector<double>& x) {
  const int m = static_cast<int>(columns.size());
  Eigen::Matrix<double, 6, Eigen::Dynamic> A(6, m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < 6; ++i) A(i, k) = columns[k][i];
  Eigen::Matrix<double, 6, 1> bv;
  for (int i = 0; i < 6; ++i) bv(i) = b[i];
  const Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(target.data(), m);
  const double scale = 1.0 + bv.norm() + A.norm();

  std::vector<int> others;
  for (int k = 0; k < m; ++k)
    if (k != free_index) others.push_back(k);
  const int no = static_cast<int>(others.size());

  std::vector<unsigned> masks(1u << no);
  for (unsigned s = 0; s < masks.size(); ++s) masks[s] = s;
  std::stable_sort(masks.begin(), masks.end(),
                   [](unsigned p, unsigned q) { return std::popcount(p) < std::popcount(q); });

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  for (unsigned mask : masks) {
    std::vector<int> F, S;
    std::vector<char> fixed(m, 0);
    for (int t = 0; t < no; ++t)
      if (mask & (1u << t)) fixed[others[t]] = 1;
    for (int k = 0; k < m; ++k) (fixed[k] ? S : F).push_back(k);
    if (F.empty()) continue;

    Eigen::MatrixXd AF(6, F.size());
    Eigen::VectorXd gF(F.size());
    for (std::size_t c = 0; c < F.size(); ++c) {
      AF.col(c) = A.col(F[c]);
      gF(c) = g(F[c]);
    }
    const Eigen::VectorXd rhs = bv - AF * gF;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(AF);
    const Eigen::VectorXd d = cod.solve(rhs);
    const Eigen::VectorXd xF = gF + d;
    if ((AF * xF - bv).norm() > 1e-10 * scale) continue;
    bool feasible = true;
    for (std::size_t c = 0; c < F.size(); ++c)
      if (F[c] != free_index && xF(c) < -1e-11 * scale) feasible = false;
    if (!feasible) continue;

    std::vector<double> cand(m, 0.0);
    for (std::size_t c = 0; c < F.size(); ++c) cand[F[c]] = xF(c);
    double obj = 0.0;
    for (int k = 0; k < m; ++k) obj += (cand[k] - g(k)) * (cand[k] - g(k));

    // Multipliers of the active bounds must be nonnegative.
    bool kkt = true;
    if (!S.empty()) {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> codT(AF.transpose());
      const Eigen::VectorXd lam = codT.solve(d);
      for (int s : S) {
        const double nu = -g(s) - A.col(s).dot(lam);
        if (nu < -1e-9 * scale) kkt = false;
      }
    }
    if (kkt) {
      x = cand;
      return true;
    }
    if (obj < best) {
      best = obj;
      best_x = cand;
    }
  }
  if (best_x.empty()) return false;
  x = best_x;
  return true;
}

namespace {


// Taylor coefficients of the jump u^+ - u^- continued from the minus side.
struct JumpTaylor {
  double d0, dxi, deta, dxixi, dxieta, detaeta;
};

JumpTaylor jump_taylor(const JumpDerivatives& jd, double kplus, double chi2, double fjump) {
  JumpTaylor t;
  t.d0 = jd.w;
  t.dxi = jd.v / kplus;
  t.deta = jd.w_s;
  t.detaeta = jd.w_ss - chi2 * jd.v / kplus;
  t.dxixi = fjump / kplus - t.detaeta;
  t.dxieta = chi2 * jd.w_s + jd.v_s / kplus;
  return t;
}

double jump_at(const JumpTaylor& t, double xi, double eta) {
  return t.d0 + xi * t.dxi + eta * t.deta + 0.5 * xi * xi * t.dxixi + xi * eta * t.dxieta +
         0.5 * eta * eta * t.detaeta;
}

void check_arms(const CompositeGrid& g, const Node& c, const LevelSet& ls) {
  const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
  for (int a = 0; a < 4; ++a) {
    const NodeId q = g.at(c.I + di[a], c.J + dj[a]);
    if (q == kNoNode) continue;
    const Point p0 = c.p, p1 = g.node(q).p;
    int changes = 0;
    Side prev = side_of(ls(p0));
    for (int k = 1; k <= 16; ++k) {
      const double t = k / 16.0;
      const Side s = side_of(ls(p0 + t * (p1 - p0)));
      if (s != prev) ++changes;
      prev = s;
    }
    if (changes > 1) {
      std::ostringstream os;
      os << "arm from (" << c.p.x << ", " << c.p.y << ") crosses the interface " << changes << " times";
      throw Error(ErrorKind::MultipleCrossings, os.str());
    }
  }
}

// Expansion data in the frame of the centre's side: the reference side plays
// the role of the minus side. For a plus-side centre the frame is mirrored
// (xi, eta) -> (-xi, -eta), which flips the curvature and the signs of w,
// w_ss, v_s and [f] while v and w_s are unchanged.
struct Setup {
  InterfaceFrame fr;
  Side center_side;
  bool mirrored = false;
  double k_ref = 1.0, k_far = 1.0;
  double chi2 = 0.0;  // curve second derivative in the reference frame
  JumpTaylor jt;
};

Setup prepare(const CompositeGrid& g, const Node& c, const LevelSet& ls, double km, double kp, const JumpData& jumps,
              const SideField& f) {
  if (c.tag != NodeTag::FineIrregular) throw Error(ErrorKind::BadParams, "node is not an irregular fine node");
  check_arms(g, c, ls);
  Setup s;
  s.fr = project_to_interface(ls, c.p);
  s.center_side = side_of(ls(c.p));
  s.mirrored = s.center_side == Side::Plus;
  JumpDerivatives jd = jump_derivatives(jumps, ls, s.fr, g.h_f);
  double fjump = f(s.fr.foot, Side::Plus) - f(s.fr.foot, Side::Minus);
  s.chi2 = -s.fr.curvature;
  s.k_ref = km;
  s.k_far = kp;
  if (s.mirrored) {
    jd.w = -jd.w;
    jd.w_ss = -jd.w_ss;
    jd.v_s = -jd.v_s;
    fjump = -fjump;
    s.chi2 = -s.chi2;
    std::swap(s.k_ref, s.k_far);
  }
  s.jt = jump_taylor(jd, s.k_far, s.chi2, fjump);
  return s;
}

struct RefPoint {
  NodeId id;
  double xi, eta;  // reference frame, in units of h_f
  bool far;        // across the interface from the centre
};

RefPoint ref_point(const CompositeGrid& g, NodeId q, const Setup& s, const LevelSet& ls) {
  const Point d = g.node(q).p - s.fr.foot;
  const double sg = s.mirrored ? -1.0 : 1.0;
  return {q, sg * dot(d, s.fr.normal) / g.h_f, sg * dot(d, s.fr.tangent) / g.h_f,
          side_of(ls(g.node(q).p)) != s.center_side};
}

double correction_of(const std::vector<RefPoint>& pts, const std::vector<double>& gamma, const Setup& s, double hf) {
  double corr = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (!pts[k].far || gamma[k] == 0.0) continue;
    corr += gamma[k] * jump_at(s.jt, pts[k].xi * hf, pts[k].eta * hf);
  }
  return corr;
}

}  // namespace

IrregularStencil singular_source_stencil_2d(const CompositeGrid& g, NodeId id, const LevelSet& ls, double kappa,
                                            const JumpData& jumps, const SideField& f) {
  const Node& c = g.node(id);
  if (c.tag != NodeTag::FineIrregular) throw Error(ErrorKind::BadParams, "node is not an irregular fine node");
  check_arms(g, c, ls);
  IrregularStencil out;
  out.center_side = side_of(ls(c.p));
  out.crossing = project_to_interface(ls, c.p).foot;
  const int di[5] = {0, -1, 1, 0, 0}, dj[5] = {0, 0, 0, -1, 1};
  const double a = kappa / (g.h_f * g.h_f);
  const double phi_c = ls(c.p);
  for (int k = 0; k < 5; ++k) {
    const NodeId q = g.at(c.I + di[k], c.J + dj[k]);
    if (q == kNoNode) throw Error(ErrorKind::BadParams, "irregular node lacks a five-point neighbourhood");
    const double gamma = k == 0 ? -4 * a : a;
    out.nodes.push_back(q);
    out.alpha.push_back(gamma);
    const Point pk = g.node(q).p;
    if (k == 0 || side_of(ls(pk)) == out.center_side) continue;

    // Crossing point on the arm, then the jump continued to the far node.
    double t0 = 0.0, t1 = 1.0, f0 = phi_c, f1 = ls(pk);
    for (int it = 0; it < 60 && t1 - t0 > 1e-15; ++it) {
      const double tm = f1 != f0 ? std::clamp(t0 - f0 * (t1 - t0) / (f1 - f0), t0, t1) : 0.5 * (t0 + t1);
      const double t = (tm <= t0 || tm >= t1) ? 0.5 * (t0 + t1) : tm;
      const double ft = ls(c.p + t * (pk - c.p));
      if (ft == 0.0) {
        t0 = t1 = t;
        break;
      }
      if ((ft > 0) == (f0 > 0)) {
        t0 = t;
        f0 = ft;
      } else {
        t1 = t;
        f1 = ft;
      }
      if (std::abs(ft) < 1e-14) {
        t0 = t1 = t;
        break;
      }
    }
    const InterfaceFrame fr = project_to_interface(ls, c.p + (0.5 * (t0 + t1)) * (pk - c.p));
    const JumpDerivatives jd = jump_derivatives(jumps, ls, fr, g.h_f);
    const double fjump = f(fr.foot, Side::Plus) - f(fr.foot, Side::Minus);
    const JumpTaylor jt = jump_taylor(jd, kappa, -fr.curvature, fjump);
    const Point d = pk - fr.foot;
    const double J = jump_at(jt, dot(d, fr.normal), dot(d, fr.tangent));
    out.correction += out.center_side == Side::Minus ? gamma * J : -gamma * J;
  }
  return out;
}

IrregularStencil iim_discontinuous_stencil_2d(const CompositeGrid& g, NodeId id, const LevelSet& ls, double km,
                                              double kp, const JumpData& jumps, const SideField& f) {
  if (km == kp) return singular_source_stencil_2d(g, id, ls, km, jumps, f);
  const Node& c = g.node(id);
  const Setup s = prepare(g, c, ls, km, kp, jumps, f);
  const double rho = s.k_ref / s.k_far;
  const double chi = s.chi2 * g.h_f;  // scaled second derivative of the interface curve
  const double kc = s.k_ref;
  const std::array<double, 6> b{0, 0, 0, kc, kc, 0};

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<std::pair<int, int>> offs;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) offs.emplace_back(di, dj);
    if (attempt == 1) {
      for (auto o : {std::pair{-2, 0}, std::pair{2, 0}, std::pair{0, -2}, std::pair{0, 2}}) offs.push_back(o);
    }
    std::vector<RefPoint> pts;
    std::vector<std::array<double, 6>> cols;
    std::vector<double> target;
    int center = -1;
    for (auto [di, dj] : offs) {
      const NodeId q = g.at(c.I + di, c.J + dj);
      if (q == kNoNode) continue;
      const RefPoint p = ref_point(g, q, s, ls);
      const double x = p.xi, y = p.eta;
      std::array<double, 6> col;
      if (!p.far) {
        col = {1.0, x, y, 0.5 * x * x, 0.5 * y * y, x * y};
      } else {
        col = {1.0,
               rho * x + 0.5 * chi * (rho - 1) * (x * x - y * y),
               y + chi * (1 - rho) * x * y,
               0.5 * rho * x * x,
               0.5 * (rho - 1) * x * x + 0.5 * y * y,
               rho * x * y};
      }
      if (di == 0 && dj == 0) center = static_cast<int>(pts.size());
      const bool axis = (std::abs(di) + std::abs(dj)) == 1;
      target.push_back(di == 0 && dj == 0 ? -4 * kc : (axis ? kc : 0.0));
      pts.push_back(p);
      cols.push_back(col);
    }
    std::vector<double> gh;
    if (!sign_constrained_lsq(cols, b, target, center, gh)) continue;
    if (!(gh[center] < 0.0)) continue;

    IrregularStencil out;
    const double inv = 1.0 / (g.h_f * g.h_f);
    const double tiny = 1e-13 * std::abs(gh[center]);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      double v = gh[k];
      if (static_cast<int>(k) != center && v < tiny) v = 0.0;
      gh[k] = v;
      out.nodes.push_back(pts[k].id);
      out.alpha.push_back(v * inv);
    }
    out.correction = correction_of(pts, out.alpha, s, g.h_f);
    out.center_side = s.center_side;
    out.crossing = s.fr.foot;
    return out;
  }
  std::ostringstream os;
  os << "no sign-preserving interface stencil at (" << c.p.x << ", " << c.p.y << ")";
  throw Error(ErrorKind::SignViolation, os.str());
}

}  // namespace twogrid
