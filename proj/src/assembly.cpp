#include "twogrid/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>

#include "twogrid/errors.hpp"
#include "twogrid/iim.hpp"
#include "twogrid/stencils.hpp"

namespace twogrid {

namespace {

// Per-assembly data shared read-only by all rows.
struct Context {
  std::vector<LocalStencil<double>> hanging;  // index j, h = 1, kappa = 1
};

LocalStencil<double> to_double(const LocalStencil<Rational>& s) {
  return {twogrid::to_double(s.alpha), twogrid::to_double(s.beta)};
}

Context make_context(const CompositeGrid& g) {
  Context c;
  if (g.kind != GridKind::Tube2D || g.count(NodeTag::Hanging) == 0) return c;
  const bool tabulated = g.r == 2 || g.r == 4 || g.r == 8 || g.r == 16;
  c.hanging.resize(static_cast<std::size_t>(g.r));
  for (int j = 1; j < g.r; ++j) {
    c.hanging[j] = to_double(tabulated ? hanging_coeffs(g.r, j) : derive_hanging_coeffs(g.r, j));
  }
  return c;
}

struct RowBuilder {
  RawRow row;
  void add(NodeId q, double w) {
    if (q == kNoNode) throw Error(ErrorKind::BadParams, "stencil neighbour missing from the grid");
    row.entries.emplace_back(q, w);
  }
  // Merges duplicate columns and drops zeros; order is by column.
  RawRow finish() {
    auto& e = row.entries;
    std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<NodeId, double>> out;
    for (const auto& [c, w] : e) {
      if (!out.empty() && out.back().first == c) {
        out.back().second += w;
      } else {
        out.emplace_back(c, w);
      }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& p) { return p.second == 0.0; }), out.end());
    e = std::move(out);
    return std::move(row);
  }
};

// Applies a 3x3 LocalStencil whose offsets map to lattice steps (sx, sy).
void apply3x3(RowBuilder& b, const CompositeGrid& g, const Node& n, const LocalStencil<double>& s, int sx, int sy,
              const ProblemSpec& p, Side side) {
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      const int k = idx3(di, dj);
      if (s.alpha[k] == 0.0 && s.beta[k] == 0.0) continue;
      const NodeId q = g.at(n.I + di * sx, n.J + dj * sy);
      if (q == kNoNode) throw Error(ErrorKind::BadParams, "stencil neighbour missing from the grid");
      if (s.alpha[k] != 0.0) b.add(q, s.alpha[k]);
      if (s.beta[k] != 0.0) b.row.rhs += s.beta[k] * p.f(g.node(q).p, side);
    }
  }
}

void apply1d(RowBuilder& b, const CompositeGrid& g, const Node& n, const LocalStencil<double>& s, const ProblemSpec& p,
             Side side) {
  const NodeId ids[3] = {g.west(n.id), n.id, g.east(n.id)};
  for (int k = 0; k < 3; ++k) {
    if (s.alpha[k] != 0.0) b.add(ids[k], s.alpha[k]);
    if (s.beta[k] != 0.0) b.row.rhs += s.beta[k] * p.f(g.node(ids[k]).p, side);
  }
}

// Spacings to the nearest nodes in the same row.
std::pair<double, double> spacings(const CompositeGrid& g, const Node& n) {
  const NodeId w = g.west(n.id), e = g.east(n.id);
  if (w == kNoNode || e == kNoNode) throw Error(ErrorKind::BadParams, "node lacks a horizontal neighbour");
  return {n.p.x - g.node(w).p.x, g.node(e).p.x - n.p.x};
}

// The two 1D irregular equations for the column pair (irr_I, irr_I + 1).
IrregularStencil irregular_1d(const CompositeGrid& g, const Node& n, double km, double kp, const JumpData& jumps,
                              double K) {
  const int j = g.irr_I;
  for (int I = j - 1; I <= j + 2; ++I) {
    if (g.at(I, n.J) == kNoNode)
      throw Error(ErrorKind::TubeTooNarrow, "interface stencil needs four uniform fine nodes around alpha");
  }
  const auto pr = iim_1d_irregular(km, kp, g.alpha, g.x_of(j), g.h_f, jumps, K);
  return n.I == j ? pr.first : pr.second;
}

RawRow row_interval(const CompositeGrid& g, const ProblemSpec& p, const Node& n) {
  RowBuilder b;
  const Side side = g.side(n.id);
  const double k = p.kappa(side);
  const auto [h1, h2] = spacings(g, n);
  if (p.convection != 0.0) {
    apply1d(b, g, n, centered_nonuniform_1d(k, p.convection, p.K, h1, h2), p, side);
    return b.finish();
  }
  switch (n.tag) {
    case NodeTag::CoarseRegular:
      apply1d(b, g, n, compact4_uniform_1d(k, p.K, g.h), p, side);
      break;
    case NodeTag::Border:
      apply1d(b, g, n, border_coeffs_1d(h1, h2, k, p.K), p, side);
      break;
    case NodeTag::FineRegular: {
      const double a = k / (g.h_f * g.h_f);
      LocalStencil<double> s{{a, -2 * a + p.K, a}, {0, 1, 0}};
      apply1d(b, g, n, s, p, side);
      break;
    }
    case NodeTag::FineIrregular: {
      const IrregularStencil s = irregular_1d(g, n, p.kappa_minus, p.kappa_plus, p.jumps, p.K);
      apply1d(b, g, n, {s.alpha, {0, 1, 0}}, p, side);
      b.row.rhs += s.correction;
      break;
    }
    default:
      throw Error(ErrorKind::BadParams, "unexpected node tag in a 1D grid");
  }
  return b.finish();
}

RawRow row_line(const CompositeGrid& g, const ProblemSpec& p, const Node& n) {
  if (p.kappa_minus != 1.0 || p.kappa_plus != 1.0 || p.K != 0.0)
    throw Error(ErrorKind::BadParams, "the line-interface scheme needs kappa = 1 and K = 0");
  RowBuilder b;
  const Side side = g.side(n.id);
  switch (n.tag) {
    case NodeTag::CoarseRegular:
      apply3x3(b, g, n, nine_point_compact_2d(g.h, 0.0), g.r, 1, p, side);
      break;
    case NodeTag::Border: {
      const auto [h1, h2] = spacings(g, n);
      const LocalStencil<double> s = border_coeffs_2d(h1, h2, g.h_y);
      const int Iw = g.node(g.west(n.id)).I, Ie = g.node(g.east(n.id)).I;
      const int cols[3] = {Iw, n.I, Ie};
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int k = idx3(di, dj);
          const NodeId q = g.at(cols[di + 1], n.J + dj);
          if (s.alpha[k] != 0.0) b.add(q, s.alpha[k]);
          if (s.beta[k] != 0.0) b.row.rhs += s.beta[k] * p.f(g.node(q).p, side);
        }
      }
      break;
    }
    case NodeTag::FineRegular:
      apply3x3(b, g, n, strip_mixed_order_2d(g.h_f, g.h_y), 1, 1, p, side);
      break;
    case NodeTag::FineIrregular: {
      const IrregularStencil s = irregular_1d(g, n, 1.0, 1.0, p.jumps, 0.0);
      apply3x3(b, g, n, strip_with_x_weights(s.alpha[0], s.alpha[1], s.alpha[2], g.h_y), 1, 1, p, side);
      b.row.rhs += s.correction;
      break;
    }
    default:
      throw Error(ErrorKind::BadParams, "unexpected node tag in a line grid");
  }
  return b.finish();
}

RawRow row_tube(const CompositeGrid& g, const ProblemSpec& p, const Node& n, const Context& ctx) {
  RowBuilder b;
  const Side side = g.side(n.id);
  const double k = p.kappa(side);
  switch (n.tag) {
    case NodeTag::CoarseRegular:
      apply3x3(b, g, n, nine_point_compact_2d(g.h, p.K, k), g.r, g.r, p, side);
      break;
    case NodeTag::FineRegular: {
      bool compact = !g.has_interface;
      for (int dj = -1; dj <= 1 && compact; ++dj)
        for (int di = -1; di <= 1; ++di)
          if (g.at(n.I + di, n.J + dj) == kNoNode) compact = false;
      if (compact) {
        apply3x3(b, g, n, nine_point_compact_2d(g.h_f, p.K, k), 1, 1, p, side);
      } else {
        const double a = k / (g.h_f * g.h_f);
        LocalStencil<double> s{std::vector<double>(9, 0.0), std::vector<double>(9, 0.0)};
        for (int q : {idx3(-1, 0), idx3(1, 0), idx3(0, -1), idx3(0, 1)}) s.alpha[q] = a;
        s.alpha[idx3(0, 0)] = -4 * a + p.K;
        s.beta[idx3(0, 0)] = 1.0;
        apply3x3(b, g, n, s, 1, 1, p, side);
      }
      break;
    }
    case NodeTag::FineIrregular: {
      if (p.K != 0.0) throw Error(ErrorKind::BadParams, "interface stencils need K = 0");
      const IrregularStencil s =
          p.kappa_minus == p.kappa_plus
              ? singular_source_stencil_2d(g, n.id, p.level_set, p.kappa_minus, p.jumps, p.f)
              : iim_discontinuous_stencil_2d(g, n.id, p.level_set, p.kappa_minus, p.kappa_plus, p.jumps, p.f);
      for (std::size_t q = 0; q < s.nodes.size(); ++q) b.add(s.nodes[q], s.alpha[q]);
      b.row.rhs += p.f(n.p, s.center_side) + s.correction;
      break;
    }
    case NodeTag::Hanging: {
      const HangingGeometry hg = hanging_geometry(g, n.id);
      const LocalStencil<double>& s = ctx.hanging.at(static_cast<std::size_t>(hg.j));
      const double scale = k / (g.h * g.h);
      for (int q = 0; q < 7; ++q) {
        const NodeId id = q < 6 ? hg.pts[q] : n.id;
        const double a = s.alpha[q] * scale + p.K * s.beta[q];
        if (a != 0.0) b.add(id, a);
        if (s.beta[q] != 0.0) b.row.rhs += s.beta[q] * p.f(g.node(id).p, side);
      }
      break;
    }
    default:
      throw Error(ErrorKind::BadParams, "unexpected node tag in a tube grid");
  }
  return b.finish();
}

RawRow row_kernel(const CompositeGrid& g, const ProblemSpec& p, NodeId id, const Context& ctx) {
  const Node& n = g.node(id);
  try {
    RawRow r;
    switch (g.kind) {
      case GridKind::Interval1D: r = row_interval(g, p, n); break;
      case GridKind::Line2D: r = row_line(g, p, n); break;
      case GridKind::Tube2D: r = row_tube(g, p, n, ctx); break;
    }
    r.node = id;
    return r;
  } catch (const Error& e) {
    std::ostringstream os;
    os << e.detail() << " [node " << id << " " << to_string(n.tag) << " at (" << n.p.x << ", " << n.p.y << ")]";
    throw Error(e.kind(), os.str());
  }
}

void check_dims(const CompositeGrid& g, const ProblemSpec& p) {
  const bool oned = g.kind == GridKind::Interval1D;
  if (oned != (p.dim == 1)) throw Error(ErrorKind::BadParams, "grid and problem dimensions differ");
}

std::vector<NodeId> interior_nodes(const CompositeGrid& g) {
  std::vector<NodeId> ids;
  for (const Node& n : g.nodes)
    if (n.tag != NodeTag::Boundary) ids.push_back(n.id);
  return ids;
}

}  // namespace

RawRow assemble_row(const CompositeGrid& g, const ProblemSpec& p, NodeId id) {
  check_dims(g, p);
  if (g.node(id).tag == NodeTag::Boundary) throw Error(ErrorKind::BadParams, "boundary nodes carry no equation");
  return row_kernel(g, p, id, make_context(g));
}

RawSystem assemble_rows_serial(const CompositeGrid& g, const ProblemSpec& p) {
  check_dims(g, p);
  const Context ctx = make_context(g);
  const std::vector<NodeId> ids = interior_nodes(g);
  RawSystem s;
  s.n_nodes = g.size();
  s.rows.reserve(ids.size());
  for (NodeId id : ids) s.rows.push_back(row_kernel(g, p, id, ctx));
  return s;
}

RawSystem assemble_rows(const CompositeGrid& g, const ProblemSpec& p) {
  check_dims(g, p);
  const Context ctx = make_context(g);
  const std::vector<NodeId> ids = interior_nodes(g);
  RawSystem s;
  s.n_nodes = g.size();
  s.rows.resize(ids.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(ids.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long k = 0; k < n; ++k) {
    try {
      s.rows[k] = row_kernel(g, p, ids[k], ctx);
    } catch (...) {
#pragma omp critical(twogrid_assembly_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return s;
}

SparseSystem apply_dirichlet(const RawSystem& raw, const CompositeGrid& grid,
                             const std::function<double(Point)>& boundary) {
  SparseSystem s;
  s.node_to_row.assign(raw.n_nodes, -1);
  s.row_to_node.reserve(raw.rows.size());
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    s.node_to_row[raw.rows[r].node] = static_cast<int>(r);
    s.row_to_node.push_back(raw.rows[r].node);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(raw.rows.size());
  s.rhs.resize(n);
  s.matrix.resize(n, n);
  Eigen::VectorXi nnz(n);
  for (Eigen::Index r = 0; r < n; ++r) nnz(r) = static_cast<int>(raw.rows[r].entries.size());
  s.matrix.reserve(nnz);
  for (Eigen::Index r = 0; r < n; ++r) {
    const RawRow& row = raw.rows[r];
    double rhs = row.rhs;
    for (const auto& [c, w] : row.entries) {
      const int col = s.node_to_row[c];
      if (col < 0) {
        rhs -= w * (boundary ? boundary(grid.node(c).p) : 0.0);
      } else {
        s.matrix.insert(r, col) = w;
      }
    }
    s.rhs(r) = rhs;
  }
  s.matrix.makeCompressed();
  return s;
}

SparseSystem assemble(const CompositeGrid& g, const ProblemSpec& p, bool parallel) {
  const RawSystem raw = parallel ? assemble_rows(g, p) : assemble_rows_serial(g, p);
  return apply_dirichlet(raw, g, p.boundary);
}

std::vector<double> expand_solution(const SparseSystem& s, const CompositeGrid& g, const Eigen::VectorXd& x,
                                    const std::function<double(Point)>& boundary) {
  if (x.size() != static_cast<Eigen::Index>(s.row_to_node.size()))
    throw Error(ErrorKind::BadParams, "solution length does not match the system");
  std::vector<double> out(g.size(), 0.0);
  for (const Node& n : g.nodes) {
    const int r = s.node_to_row[n.id];
    out[n.id] = r >= 0 ? x(r) : (boundary ? boundary(n.p) : 0.0);
  }
  return out;
}

void write_triplets(const SparseSystem& s, std::ostream& os) {
  os << s.matrix.rows() << ' ' << s.matrix.cols() << ' ' << s.matrix.nonZeros() << '\n';
  os.precision(17);
  for (Eigen::Index r = 0; r < s.matrix.outerSize(); ++r)
    for (RowMatrix::InnerIterator it(s.matrix, r); it; ++it) os << r << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace twogrid
