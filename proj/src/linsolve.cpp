#include "twogrid/linsolve.hpp"

#include <Eigen/UmfPackSupport>
#include <cmath>
#include <limits>
#include <sstream>

#include "twogrid/errors.hpp"

namespace twogrid {

namespace {

// b - A x accumulated in long double.
Eigen::VectorXd residual(const RowMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  Eigen::VectorXd r(b.size());
  for (Eigen::Index i = 0; i < A.outerSize(); ++i) {
    long double acc = b(i);
    for (RowMatrix::InnerIterator it(A, i); it; ++it)
      acc -= static_cast<long double>(it.value()) * x(it.col());
    r(i) = static_cast<double>(acc);
  }
  return r;
}

}  // namespace

Eigen::VectorXd solve(const SparseSystem& s, double tol, SolveInfo* info) {
  const RowMatrix& A = s.matrix;
  const Eigen::VectorXd& b = s.rhs;
  if (A.rows() != A.cols() || A.rows() != b.size()) throw Error(ErrorKind::BadParams, "system is not square");
  if (A.rows() == 0) return Eigen::VectorXd();

  const Eigen::SparseMatrix<double> Ac = A;
  Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(Ac);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::SingularMatrix, "sparse LU factorization failed");

  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw Error(ErrorKind::SingularMatrix, "sparse LU solve failed");
  const double bn = b.norm() > 0 ? b.norm() : 1.0;
  Eigen::VectorXd r = residual(A, x, b);
  double rel = r.norm() / bn;
  int it = 0;
  for (; rel > tol && it < 5; ++it) {
    x += lu.solve(r);
    r = residual(A, x, b);
    rel = r.norm() / bn;
  }
  if (!(rel <= tol)) {
    // Rows scaled like kappa / h_f^2 put a rounding floor on the normwise
    // residual. Accept when the componentwise backward error is at that floor.
    double omega = 0.0;
    for (Eigen::Index i = 0; i < A.outerSize(); ++i) {
      double scale = std::abs(b(i));
      for (RowMatrix::InnerIterator e(A, i); e; ++e) scale += std::abs(e.value() * x(e.col()));
      if (scale > 0.0) omega = std::max(omega, std::abs(r(i)) / scale);
    }
    if (!(omega <= 64 * std::numeric_limits<double>::epsilon())) {
      std::ostringstream os;
      os << "relative residual " << rel << " above " << tol << " (backward error " << omega << ")";
      throw Error(ErrorKind::NoConvergence, os.str());
    }
  }
  if (info) *info = {rel, it};
  return x;
}

MMatrixReport verify_m_matrix(const RowMatrix& A, double rel_tol) {
  MMatrixReport rep;
  bool strict = false;
  for (Eigen::Index i = 0; i < A.outerSize(); ++i) {
    double diag = 0.0, sum = 0.0, scale = 0.0;
    for (RowMatrix::InnerIterator it(A, i); it; ++it) {
      sum += it.value();
      scale = std::max(scale, std::abs(it.value()));
      if (it.col() == i) {
        diag = it.value();
      } else if (it.value() < 0.0) {
        rep.sign_ok = false;
        rep.offenders.push_back({static_cast<int>(i), static_cast<int>(it.col()), it.value()});
      }
    }
    if (!(diag < 0.0)) {
      rep.sign_ok = false;
      rep.offenders.push_back({static_cast<int>(i), static_cast<int>(i), diag});
    }
    const double tol = rel_tol * std::max(std::abs(diag), scale);
    if (sum > tol) {
      rep.row_sum_ok = false;
      rep.row_sum_offenders.push_back({static_cast<int>(i), -1, sum});
    } else if (sum < -tol) {
      strict = true;
    }
  }
  if (!strict && A.rows() > 0) rep.row_sum_ok = false;
  return rep;
}

MMatrixReport verify_m_matrix(const SparseSystem& s, double rel_tol) { return verify_m_matrix(s.matrix, rel_tol); }

}  // namespace twogrid
