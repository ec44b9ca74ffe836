#pragma once

#include <functional>
#include <string>
#include <vector>

#include "twogrid/geometry.hpp"
#include "twogrid/grid.hpp"
#include "twogrid/iim.hpp"
#include "twogrid/jet.hpp"

namespace twogrid {

// How the composite grid for a problem is built.
enum class GridRecipe {
  IntervalInterface,  // 1D, refined around alpha
  IntervalLayer,      // 1D, refined on [b - lambda*h, b]
  Line,               // 2D, refined strip around x = alpha
  Tube,               // 2D, refined tube around {phi = 0}
};

// div(kappa grad u) + convection u' + K u = f, with piecewise-constant kappa,
// jumps across the interface and Dirichlet data on the whole boundary.
struct ProblemSpec {
  std::string name;
  int dim = 2;
  double kappa_minus = 1.0;
  double kappa_plus = 1.0;
  double K = 0.0;
  double convection = 0.0;  // 1D only
  double epsilon = 0.0;     // layer width parameter where applicable
  Domain domain;
  GridRecipe recipe = GridRecipe::Tube;
  bool has_interface = true;
  double alpha = 0.0;       // 1D and line interfaces
  LevelSet level_set;       // tube problems
  double default_lambda = 2.0;

  SideField f;
  JumpData jumps;
  std::function<double(Point)> boundary;
  // Exact solution per side with first and second derivatives; may be empty.
  std::function<Jet(Point, Side)> exact;

  bool has_exact() const { return static_cast<bool>(exact); }
  double kappa(Side s) const { return s == Side::Plus ? kappa_plus : kappa_minus; }
  Side side_at(Point p) const;
};

struct ProblemParams {
  double kappa_minus = 0.0;  // 0 selects the fixture default
  double kappa_plus = 0.0;
  double eps = 0.0;
};

// boundary_layer_1d, piecewise_kappa_1d, line_interface_2d, peskin_circle,
// flower, internal_layer. Throws UnknownProblem or BadParams.
ProblemSpec make_problem(const std::string& name, const ProblemParams& params = {});
std::vector<std::string> problem_names();

// Source of the internal-layer problem exactly as published (sigma_1..4 form).
double layer_source_printed(double x, double y, double eps);

// Relative PDE residual of the exact solution at random off-interface points,
// with the Laplacian taken by fourth-order central differences.
double exact_pde_residual(const ProblemSpec& p, int samples = 100, unsigned seed = 7);

struct ErrorNorms {
  double err_coarse = 0.0;  // CoarseRegular and Border nodes
  double err_fine = 0.0;    // FineRegular, FineIrregular and Hanging nodes
};

// Max-norm errors; `values` holds one entry per grid node.
ErrorNorms exact_error(const ProblemSpec& p, const CompositeGrid& g, const std::vector<double>& values);

// Exact nodal values (Boundary nodes included).
std::vector<double> exact_values(const ProblemSpec& p, const CompositeGrid& g);

}  // namespace twogrid
