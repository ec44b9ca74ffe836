#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "twogrid/grid.hpp"
#include "twogrid/problems.hpp"

namespace twogrid {

// One discrete equation: sum over entries = rhs. Columns are node ids and
// may include Boundary nodes.
struct RawRow {
  NodeId node = kNoNode;
  std::vector<std::pair<NodeId, double>> entries;
  double rhs = 0.0;
};

struct RawSystem {
  std::vector<RawRow> rows;  // one per non-Boundary node, in node order
  std::size_t n_nodes = 0;
};

using RowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct SparseSystem {
  RowMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<NodeId> row_to_node;
  std::vector<int> node_to_row;  // -1 for Boundary nodes
};

// Equation at a single non-Boundary node. Throws with the node location
// attached when a stencil cannot be built.
RawRow assemble_row(const CompositeGrid& g, const ProblemSpec& p, NodeId id);

// All interior rows; the parallel version splits rows across OpenMP threads
// and produces the same result as the serial one.
RawSystem assemble_rows(const CompositeGrid& g, const ProblemSpec& p);
RawSystem assemble_rows_serial(const CompositeGrid& g, const ProblemSpec& p);

// Moves Boundary columns to the right-hand side using g and compresses.
SparseSystem apply_dirichlet(const RawSystem& raw, const CompositeGrid& grid,
                             const std::function<double(Point)>& boundary);

SparseSystem assemble(const CompositeGrid& g, const ProblemSpec& p, bool parallel = true);

// Full nodal vector from the unknowns plus boundary data.
std::vector<double> expand_solution(const SparseSystem& s, const CompositeGrid& g, const Eigen::VectorXd& x,
                                    const std::function<double(Point)>& boundary);

// "row col value" lines (0-based) preceded by "rows cols nnz".
void write_triplets(const SparseSystem& s, std::ostream& os);

}  // namespace twogrid
