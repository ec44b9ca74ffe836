#pragma once

#include <Eigen/Dense>
#include <vector>

#include "twogrid/assembly.hpp"

namespace twogrid {

struct SolveInfo {
  double residual = 0.0;  // ||A x - b||_2 / ||b||_2 (absolute when b = 0)
  int refinements = 0;
};

// Sparse LU with iterative refinement until the relative residual is below
// tol, or until the componentwise backward error reaches rounding level.
// Throws SingularMatrix or NoConvergence.
Eigen::VectorXd solve(const SparseSystem& s, double tol = 1e-12, SolveInfo* info = nullptr);

struct MatrixEntry {
  int row = 0, col = 0;
  double value = 0.0;
};

// Sign convention: diagonals negative, off-diagonals nonnegative, row sums
// nonpositive with at least one strictly negative row.
struct MMatrixReport {
  bool sign_ok = true;
  bool row_sum_ok = true;
  std::vector<MatrixEntry> offenders;        // sign violations
  std::vector<MatrixEntry> row_sum_offenders;  // (row, -1, row sum)
  bool ok() const { return sign_ok && row_sum_ok; }
};

MMatrixReport verify_m_matrix(const SparseSystem& s, double rel_tol = 1e-10);
MMatrixReport verify_m_matrix(const RowMatrix& A, double rel_tol = 1e-10);

}  // namespace twogrid
