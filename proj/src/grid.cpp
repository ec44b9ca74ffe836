#include "twogrid/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "twogrid/errors.hpp"

namespace twogrid {

const char* to_string(NodeTag t) {
  switch (t) {
    case NodeTag::CoarseRegular: return "CoarseRegular";
    case NodeTag::FineRegular: return "FineRegular";
    case NodeTag::FineIrregular: return "FineIrregular";
    case NodeTag::Border: return "Border";
    case NodeTag::Hanging: return "Hanging";
    case NodeTag::Boundary: return "Boundary";
  }
  return "?";
}

// Coordinates are computed from the domain centre so that mirror-image
// lattice points get exactly negated offsets.
double CompositeGrid::x_of(int I) const {
  const double cx = 0.5 * (domain.a + domain.b);
  return cx + (2 * I - nx) * ((domain.b - domain.a) / (2.0 * nx));
}

double CompositeGrid::y_of(int J) const {
  if (ny == 0) return 0.0;
  const double cy = 0.5 * (domain.c + domain.d);
  return cy + (2 * J - ny) * ((domain.d - domain.c) / (2.0 * ny));
}

std::size_t CompositeGrid::count(NodeTag t) const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [t](const Node& n) { return n.tag == t; }));
}

Side CompositeGrid::side(NodeId id) const {
  const Node& n = node(id);
  if (kind == GridKind::Tube2D) return has_interface ? side_of(level_set(n.p)) : Side::Minus;
  if (irr_I < 0) return Side::Minus;
  return n.I <= irr_I ? Side::Minus : Side::Plus;
}

void CompositeGrid::finalize(const std::vector<std::pair<int, int>>& pts, const std::vector<NodeTag>& tags) {
  lattice_.assign(static_cast<std::size_t>(nx + 1) * (ny + 1), kNoNode);
  nodes.clear();
  nodes.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Node n;
    n.id = static_cast<NodeId>(k);
    n.I = pts[k].first;
    n.J = pts[k].second;
    n.p = {x_of(n.I), y_of(n.J)};
    n.tag = tags[k];
    lattice_[static_cast<std::size_t>(n.J) * (nx + 1) + n.I] = n.id;
    nodes.push_back(n);
  }
  west_.assign(nodes.size(), kNoNode);
  east_.assign(nodes.size(), kNoNode);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    if (nodes[k].J == nodes[k - 1].J) {
      west_[k] = nodes[k - 1].id;
      east_[k - 1] = nodes[k].id;
    }
  }
}

namespace {

void check_common(const GridParams& p) {
  if (p.N < 4) throw Error(ErrorKind::BadParams, "N must be at least 4");
  if (!(p.lambda > 0.0)) throw Error(ErrorKind::BadParams, "lambda must be positive");
  if (!(p.domain.b > p.domain.a)) throw Error(ErrorKind::BadParams, "empty x range");
}

int lattice_ratio(const GridParams& p) {
  if (p.hf_square) {
    const double rr = p.N / (p.domain.b - p.domain.a);
    const long r = std::lround(rr);
    if (r < 2 || std::abs(rr - r) > 1e-9 * rr)
      throw Error(ErrorKind::BadParams, "h_f = h^2 needs 1/h to be an integer >= 2");
    return static_cast<int>(r);
  }
  if (p.r < 2) throw Error(ErrorKind::BadParams, "refinement ratio must be >= 2");
  return p.r;
}

CompositeGrid interval_frame(const GridParams& p) {
  check_common(p);
  CompositeGrid g;
  g.N = p.N;
  g.r = lattice_ratio(p);
  g.nx = p.N * g.r;
  g.lambda = p.lambda;
  g.domain = p.domain;
  g.h = (p.domain.b - p.domain.a) / p.N;
  g.h_f = g.h / g.r;
  return g;
}

// Column layout of an interval two-grid: lattice indices present and their
// tags, with fine lattice between coarse cells KL and KR.
struct Columns {
  std::vector<int> I;
  std::vector<NodeTag> tag;
};

Columns interval_columns(const CompositeGrid& g, int KL, int KR, int irr) {
  Columns c;
  const int IL = KL * g.r, IR = KR * g.r;
  for (int I = 0; I <= g.nx; ++I) {
    const bool fine = I >= IL && I <= IR;
    if (!fine && I % g.r != 0) continue;
    NodeTag t;
    if (I == 0 || I == g.nx) {
      t = NodeTag::Boundary;
    } else if (I == IL || I == IR) {
      t = NodeTag::Border;
    } else if (fine) {
      t = (irr >= 0 && (I == irr || I == irr + 1)) ? NodeTag::FineIrregular : NodeTag::FineRegular;
    } else {
      t = NodeTag::CoarseRegular;
    }
    c.I.push_back(I);
    c.tag.push_back(t);
  }
  return c;
}

// Lattice column j with x_j <= alpha < x_{j+1}.
int bracket(const CompositeGrid& g, double alpha) {
  int j = static_cast<int>(std::floor((alpha - g.domain.a) / g.h_f));
  j = std::clamp(j, 0, g.nx - 1);
  while (j > 0 && g.x_of(j) > alpha) --j;
  while (j < g.nx - 1 && g.x_of(j + 1) <= alpha) ++j;
  return j;
}

// Coarse cells [KL, KR] spanning every coarse node within lambda*h of alpha
// and the cell containing alpha.
std::pair<int, int> interface_window(const CompositeGrid& g, double alpha, int irr) {
  int KL = irr / g.r;
  int KR = (irr + 1 + g.r - 1) / g.r;
  for (int k = 0; k <= g.N; ++k) {
    if (std::abs(g.x_of(k * g.r) - alpha) <= g.lambda * g.h) {
      KL = std::min(KL, k);
      KR = std::max(KR, k);
    }
  }
  if (KL <= 0 || KR >= g.N)
    throw Error(ErrorKind::TubeTooWide, "refinement window reaches the domain boundary");
  return {KL, KR};
}

}  // namespace

CompositeGrid build_two_grid_1d(const GridParams& p, double alpha) {
  CompositeGrid g = interval_frame(p);
  if (!(alpha > p.domain.a && alpha < p.domain.b))
    throw Error(ErrorKind::BadParams, "interface must lie strictly inside the interval");
  g.kind = GridKind::Interval1D;
  g.alpha = alpha;
  g.irr_I = bracket(g, alpha);
  const auto [KL, KR] = interface_window(g, alpha, g.irr_I);
  const Columns c = interval_columns(g, KL, KR, g.irr_I);
  std::vector<std::pair<int, int>> pts;
  for (int I : c.I) pts.emplace_back(I, 0);
  g.finalize(pts, c.tag);
  return g;
}

CompositeGrid build_refined_interval_1d(const GridParams& p, double x_lo, double x_hi) {
  CompositeGrid g = interval_frame(p);
  if (!(x_hi > x_lo)) throw Error(ErrorKind::BadParams, "empty refinement interval");
  g.kind = GridKind::Interval1D;
  const double eps = 1e-9;
  int KL = static_cast<int>(std::floor((x_lo - p.domain.a) / g.h + eps));
  int KR = static_cast<int>(std::ceil((x_hi - p.domain.a) / g.h - eps));
  KL = std::clamp(KL, 0, g.N);
  KR = std::clamp(KR, 0, g.N);
  if (KR <= KL) throw Error(ErrorKind::EmptyTube, "refinement interval covers no coarse cell");
  const Columns c = interval_columns(g, KL, KR, -1);
  std::vector<std::pair<int, int>> pts;
  for (int I : c.I) pts.emplace_back(I, 0);
  g.finalize(pts, c.tag);
  return g;
}

CompositeGrid build_line_two_grid_2d(const GridParams& p, double alpha) {
  CompositeGrid g = interval_frame(p);
  if (!(p.domain.d > p.domain.c)) throw Error(ErrorKind::BadParams, "empty y range");
  if (!(alpha > p.domain.a && alpha < p.domain.b))
    throw Error(ErrorKind::BadParams, "interface must lie strictly inside the domain");
  g.kind = GridKind::Line2D;
  g.ry = 1;
  g.ny = p.N;
  g.h_y = (p.domain.d - p.domain.c) / p.N;
  g.alpha = alpha;
  g.irr_I = bracket(g, alpha);
  const auto [KL, KR] = interface_window(g, alpha, g.irr_I);
  const Columns c = interval_columns(g, KL, KR, g.irr_I);
  std::vector<std::pair<int, int>> pts;
  std::vector<NodeTag> tags;
  for (int J = 0; J <= g.ny; ++J) {
    for (std::size_t k = 0; k < c.I.size(); ++k) {
      pts.emplace_back(c.I[k], J);
      tags.push_back((J == 0 || J == g.ny) ? NodeTag::Boundary : c.tag[k]);
    }
  }
  g.finalize(pts, tags);
  return g;
}

CompositeGrid build_tube_two_grid_2d(const GridParams& p, const LevelSet& ls, bool interface) {
  check_common(p);
  if (p.hf_square) throw Error(ErrorKind::BadParams, "h_f = h^2 is not available for tube grids");
  if (p.r < 2) throw Error(ErrorKind::BadParams, "refinement ratio must be >= 2");
  const double Lx = p.domain.b - p.domain.a, Ly = p.domain.d - p.domain.c;
  if (std::abs(Lx - Ly) > 1e-12 * Lx) throw Error(ErrorKind::BadParams, "tube grids need a square domain");

  CompositeGrid g;
  g.kind = GridKind::Tube2D;
  g.N = p.N;
  g.r = g.ry = p.r;
  g.nx = g.ny = p.N * p.r;
  g.lambda = p.lambda;
  g.domain = p.domain;
  g.h = Lx / p.N;
  g.h_f = g.h_y = g.h / p.r;
  g.level_set = ls;
  g.has_interface = interface;

  const int r = p.r, n1 = g.nx + 1;
  std::vector<char> inR(static_cast<std::size_t>(n1) * n1, 0);
  auto R = [&](int I, int J) -> bool {
    if (I < 0 || I > g.nx || J < 0 || J > g.ny) return false;
    return inR[static_cast<std::size_t>(J) * n1 + I] != 0;
  };
  bool any_parent = false;
  for (int l = 0; l <= p.N; ++l) {
    for (int k = 0; k <= p.N; ++k) {
      const Point q{g.x_of(k * r), g.y_of(l * r)};
      if (!(std::abs(ls(q)) <= p.lambda * g.h)) continue;
      if (k <= 1 || l <= 1 || k >= p.N - 1 || l >= p.N - 1)
        throw Error(ErrorKind::TubeTooWide, "refined patch reaches the domain boundary");
      any_parent = true;
      for (int J = (l - 1) * r; J <= (l + 1) * r; ++J)
        for (int I = (k - 1) * r; I <= (k + 1) * r; ++I) inR[static_cast<std::size_t>(J) * n1 + I] = 1;
    }
  }
  if (!any_parent) throw Error(ErrorKind::EmptyTube, "no coarse node within lambda*h of the interface");

  std::vector<std::pair<int, int>> pts;
  std::vector<NodeTag> tags;
  for (int J = 0; J <= g.ny; ++J) {
    for (int I = 0; I <= g.nx; ++I) {
      const bool coarse = I % r == 0 && J % r == 0;
      const bool in = R(I, J);
      if (!coarse && !in) continue;
      NodeTag t;
      if (I == 0 || J == 0 || I == g.nx || J == g.ny) {
        t = NodeTag::Boundary;
      } else if (in && R(I - 1, J) && R(I + 1, J) && R(I, J - 1) && R(I, J + 1)) {
        t = NodeTag::FineRegular;
        if (interface) {
          const Side s = side_of(ls({g.x_of(I), g.y_of(J)}));
          const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
          for (int a = 0; a < 4; ++a) {
            if (side_of(ls({g.x_of(I + di[a]), g.y_of(J + dj[a])})) != s) {
              t = NodeTag::FineIrregular;
              break;
            }
          }
        }
      } else if (coarse) {
        t = NodeTag::CoarseRegular;
      } else {
        t = NodeTag::Hanging;
      }
      pts.emplace_back(I, J);
      tags.push_back(t);
    }
  }
  g.finalize(pts, tags);

  if (interface) {
    // Coarse and hanging stencils use a single branch of the solution.
    // Neighbours lying on the interface itself are tolerated.
    auto same_side = [&](const Node& c, std::initializer_list<NodeId> ids) {
      const Side s = g.side(c.id);
      for (NodeId q : ids)
        if (q != kNoNode && g.side(q) != s && std::abs(ls(g.node(q).p)) > 1e-12) return false;
      return true;
    };
    for (const Node& n : g.nodes) {
      bool ok = true;
      if (n.tag == NodeTag::CoarseRegular) {
        ok = same_side(n, {g.at(n.I - r, n.J - r), g.at(n.I, n.J - r), g.at(n.I + r, n.J - r),
                           g.at(n.I - r, n.J), g.at(n.I + r, n.J), g.at(n.I - r, n.J + r),
                           g.at(n.I, n.J + r), g.at(n.I + r, n.J + r)});
      } else if (n.tag == NodeTag::Hanging) {
        const HangingGeometry hg = hanging_geometry(g, n.id);
        ok = same_side(n, {hg.pts[0], hg.pts[1], hg.pts[2], hg.pts[3], hg.pts[4], hg.pts[5]});
      }
      if (!ok) {
        std::ostringstream os;
        os << to_string(n.tag) << " stencil at (" << n.p.x << ", " << n.p.y
           << ") crosses the interface; increase lambda";
        throw Error(ErrorKind::TubeTooNarrow, os.str());
      }
    }
  }
  return g;
}

HangingGeometry hanging_geometry(const CompositeGrid& g, NodeId id) {
  const Node& n = g.node(id);
  if (n.tag != NodeTag::Hanging) throw Error(ErrorKind::BadParams, "node is not a hanging node");
  const int r = g.r;
  HangingGeometry hg;
  hg.r = r;
  hg.self = id;
  if (n.J % r == 0) {
    const int I0 = (n.I / r) * r;
    hg.j = n.I - I0;
    hg.pts = {g.at(I0, n.J - r), g.at(I0 + r, n.J - r), g.at(I0, n.J),
              g.at(I0 + r, n.J), g.at(I0, n.J + r), g.at(I0 + r, n.J + r)};
  } else {
    const int J0 = (n.J / r) * r;
    hg.vertical_edge = true;
    hg.j = n.J - J0;
    hg.pts = {g.at(n.I - r, J0), g.at(n.I - r, J0 + r), g.at(n.I, J0),
              g.at(n.I, J0 + r), g.at(n.I + r, J0), g.at(n.I + r, J0 + r)};
  }
  for (NodeId q : hg.pts)
    if (q == kNoNode) throw Error(ErrorKind::BadParams, "incomplete hanging-node neighbourhood");
  return hg;
}

std::string grid_to_json(const CompositeGrid& g) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Node& n : g.nodes) {
    arr.push_back({{"id", n.id}, {"x", n.p.x}, {"y", n.p.y}, {"tag", to_string(n.tag)}});
  }
  return arr.dump();
}

}  // namespace twogrid
