#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "twogrid/geometry.hpp"
#include "twogrid/grid.hpp"

namespace twogrid {

// Values and arclength derivatives of the jump data at an interface point.
// Arclength increases along the frame tangent.
struct JumpDerivatives {
  double w = 0.0, w_s = 0.0, w_ss = 0.0;
  double v = 0.0, v_s = 0.0;
};

// [u] = w and [kappa du/dn] = v on the interface. In 1D, [kappa u'] = C and
// [u] = 2 Cbar / (kappa^- + kappa^+).
struct JumpData {
  double C = 0.0;
  double Cbar = 0.0;
  std::function<double(Point)> w;
  std::function<double(Point)> v;
  // Optional exact derivatives; otherwise differenced along the interface.
  std::function<JumpDerivatives(const InterfaceFrame&)> derivatives;
};

// Source term evaluated on a given side of the interface.
using SideField = std::function<double(Point, Side)>;

JumpDerivatives jump_derivatives(const JumpData& jumps, const LevelSet& ls, const InterfaceFrame& fr, double ds);

// Equation at an irregular node: sum alpha_k U_k = f(centre) + correction.
struct IrregularStencil {
  std::vector<NodeId> nodes;   // empty for the node-free 1D form
  std::vector<double> alpha;   // aligned with nodes (1D: left, centre, right)
  double correction = 0.0;
  Side center_side = Side::Minus;
  Point crossing;              // interface point used for the expansion
};

// Closed-form 1D coefficients at x_j and x_{j+1} = x_j + h_f with
// x_j <= alpha < x_{j+1}, on a uniform fine mesh around them.
std::pair<IrregularStencil, IrregularStencil> iim_1d_irregular(double kminus, double kplus, double alpha, double xj,
                                                               double h_f, const JumpData& jumps, double K = 0.0);

// Five-point Laplacian with an interface correction (continuous kappa).
IrregularStencil singular_source_stencil_2d(const CompositeGrid& g, NodeId id, const LevelSet& ls, double kappa,
                                            const JumpData& jumps, const SideField& f);

// Nine-point (thirteen-point fallback) stencil for piecewise-constant kappa,
// built by undetermined coefficients in interface-local coordinates with the
// sign constraints enforced.
IrregularStencil iim_discontinuous_stencil_2d(const CompositeGrid& g, NodeId id, const LevelSet& ls, double kminus,
                                              double kplus, const JumpData& jumps, const SideField& f);

// Least-squares distance to `target` subject to A x = b and x_k >= 0 for
// k != free_index. Returns false when infeasible. Exposed for testing.
bool sign_constrained_lsq(const std::vector<std::array<double, 6>>& columns, const std::array<double, 6>& b,
                          const std::vector<double>& target, int free_index, std::vector<double>& x);

}  // namespace twogrid
