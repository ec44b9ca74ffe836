#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "twogrid/geometry.hpp"

namespace twogrid {

enum class NodeTag { CoarseRegular, FineRegular, FineIrregular, Border, Hanging, Boundary };
const char* to_string(NodeTag t);

enum class GridKind { Interval1D, Line2D, Tube2D };

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

struct Domain {
  double a = 0.0, b = 1.0;  // x range
  double c = 0.0, d = 1.0;  // y range (ignored in 1D)
};

struct GridParams {
  int N = 10;           // coarse intervals per side
  int r = 2;            // refinement ratio h / h_f
  bool hf_square = false;  // h_f = h^2 (1D and line grids only; needs 1/h integral)
  double lambda = 2.0;  // tube half-width in coarse cells
  Domain domain;
};

// Nodes live on a global integer lattice of pitch h_f in x. In y the pitch
// is h_f for tube grids and h for line grids.
struct Node {
  NodeId id = kNoNode;
  Point p;
  NodeTag tag = NodeTag::CoarseRegular;
  int I = 0, J = 0;
};

class CompositeGrid {
 public:
  GridKind kind = GridKind::Interval1D;
  int N = 0;
  int r = 0;   // lattice steps per coarse cell in x
  int ry = 0;  // lattice steps per coarse cell in y (0 in 1D)
  int nx = 0, ny = 0;
  double h = 0.0, h_f = 0.0, h_y = 0.0;
  double lambda = 0.0;
  Domain domain;
  std::vector<Node> nodes;

  // 1D and line grids: interface location and the lattice column j with
  // x_j <= alpha < x_{j+1}; irr_I = -1 when there is no interface.
  double alpha = 0.0;
  int irr_I = -1;
  // Tube grids: the level set used for selection.
  LevelSet level_set;
  bool has_interface = false;

  NodeId at(int I, int J = 0) const {
    if (I < 0 || I > nx || J < 0 || J > ny) return kNoNode;
    return lattice_[static_cast<std::size_t>(J) * (nx + 1) + I];
  }
  const Node& node(NodeId id) const { return nodes[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes.size(); }

  // Nearest existing nodes along x in the same row (1D and line grids).
  NodeId west(NodeId id) const { return west_[static_cast<std::size_t>(id)]; }
  NodeId east(NodeId id) const { return east_[static_cast<std::size_t>(id)]; }

  double x_of(int I) const;
  double y_of(int J) const;

  std::size_t count(NodeTag t) const;

  // Side of a node relative to the interface.
  Side side(NodeId id) const;

  // Internal: used by the builders.
  void finalize(const std::vector<std::pair<int, int>>& lattice_pts, const std::vector<NodeTag>& tags);

 private:
  std::vector<NodeId> lattice_;
  std::vector<NodeId> west_, east_;
};

// Interface-centred two-grid on [a, b]: fine lattice between the outermost
// coarse nodes within lambda*h of alpha.
CompositeGrid build_two_grid_1d(const GridParams& params, double alpha);

// Two-grid on [a, b] refined on [x_lo, x_hi] (snapped outward to coarse
// nodes), without an interface. Used by the boundary-layer problem.
CompositeGrid build_refined_interval_1d(const GridParams& params, double x_lo, double x_hi);

// Tensor product of the 1D interface grid in x with a uniform coarse grid in y.
CompositeGrid build_line_two_grid_2d(const GridParams& params, double alpha);

// Patch refinement around coarse nodes with |phi| <= lambda*h. With
// interface = false the level set only marks the refinement region.
CompositeGrid build_tube_two_grid_2d(const GridParams& params, const LevelSet& ls, bool interface = true);

// 7-point neighbourhood of a hanging node. pts are ordered
// [(0,-h), (h,-h), (0,0), (h,0), (0,+h), (h,+h)] in the local frame whose
// x axis runs along the coarse edge from its lower-index end.
struct HangingGeometry {
  int r = 0;
  int j = 0;
  bool vertical_edge = false;
  std::array<NodeId, 6> pts{};
  NodeId self = kNoNode;
};
HangingGeometry hanging_geometry(const CompositeGrid& g, NodeId id);

// JSON array of {id, x, y, tag}.
std::string grid_to_json(const CompositeGrid& g);

}  // namespace twogrid
