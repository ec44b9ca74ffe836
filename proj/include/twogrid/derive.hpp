#pragma once

#include <utility>
#include <vector>

#include "twogrid/rational.hpp"

namespace twogrid {

// Undetermined-coefficient stencil derivation in exact arithmetic.
//
// Unknowns are the u-weights alpha_k at u_points followed by the source
// weights beta_k at f_points. The truncation error
//   T = sum alpha_k u(p_k) - sum beta_k f(q_k)
// is expanded about the origin with u through total degree u_order and f
// through u_order - 2. Derivatives of f are replaced using
//   f = kappa * Laplacian(u) + K u.
// Every monomial coefficient of T is set to zero except those listed in
// `dropped`, and sum beta = 1 is always imposed.
struct Offset {
  Rational dx = 0;
  Rational dy = 0;
};

struct LinearConstraint {
  std::vector<std::pair<int, Rational>> terms;  // (unknown index, coefficient)
  Rational rhs = 0;
};

struct DerivationProblem {
  int dim = 2;
  std::vector<Offset> u_points;
  std::vector<Offset> f_points;
  Rational kappa = 1;
  Rational K = 0;
  int u_order = 4;
  std::vector<std::pair<int, int>> dropped;
  std::vector<LinearConstraint> constraints;
};

struct DerivationResult {
  std::vector<Rational> alpha;
  std::vector<Rational> beta;
  int rank = 0;
  int free_dims = 0;  // dimension of the solution family before the tie-break
};

// Throws InconsistentSystem when the conditions admit no solution. When a
// family of solutions remains, the member minimising sum beta^2 is returned.
DerivationResult derive_stencil(const DerivationProblem& prob);

// Constraint helpers.
LinearConstraint equal_constraint(int i, int j);
LinearConstraint fix_constraint(int i, const Rational& value);

// Reduced row echelon form of an augmented system [A | b] in place.
// Returns the pivot column of each nonzero row.
std::vector<int> rref(std::vector<std::vector<Rational>>& rows, int ncols);

}  // namespace twogrid
