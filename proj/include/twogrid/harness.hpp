#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "twogrid/assembly.hpp"
#include "twogrid/grid.hpp"
#include "twogrid/linsolve.hpp"
#include "twogrid/problems.hpp"

namespace twogrid {

struct CaseConfig {
  std::string problem;
  ProblemParams params;
  int N = 20;
  int r = 2;
  double lambda = 0.0;  // 0 selects the problem default
  bool hf_square = false;
  bool parallel = true;
};

struct CaseReport {
  CaseConfig config;
  double lambda = 0.0;
  double h = 0.0, h_f = 0.0;
  std::size_t nodes = 0, unknowns = 0;
  bool has_exact = false;
  ErrorNorms err;
  MMatrixReport m_matrix;
  SolveInfo solve;
  double wall_time = 0.0;  // seconds
};

// Everything produced along the way, for dumping and tests.
struct CaseArtifacts {
  CompositeGrid grid;
  SparseSystem system;
  std::vector<double> solution;  // per node
};

CompositeGrid build_grid(const ProblemSpec& p, const CaseConfig& c);

// build grid -> assemble -> verify -> solve -> exact error.
CaseReport run_case(const ProblemSpec& p, const CaseConfig& c, CaseArtifacts* out = nullptr);
CaseReport run_case(const CaseConfig& c, CaseArtifacts* out = nullptr);

enum class OrderBase { Coarse, Fine };  // orders against h or against h_f

struct StudyRow {
  int N = 0, r = 0;
  double lambda = 0.0;
  std::size_t unknowns = 0;
  double err_coarse = 0.0, err_fine = 0.0;
  double order_coarse = 0.0, order_fine = 0.0;  // NaN on the first row
  double h = 0.0, h_f = 0.0;
  bool m_matrix_ok = true;
};

struct Study {
  std::string problem;
  std::vector<StudyRow> rows;
  double average_order_coarse = 0.0;
  double average_order_fine = 0.0;
};

// p = log(E1/E2) / log(h1/h2) between consecutive entries; NaN when either
// error is zero or the spacings agree.
double observed_order(double e1, double e2, double h1, double h2);

Study study_from_reports(const std::string& problem, const std::vector<CaseReport>& reports,
                         OrderBase base = OrderBase::Coarse);
Study convergence_study(const CaseConfig& base, const std::vector<std::pair<int, int>>& schedule,
                        OrderBase order_base = OrderBase::Coarse);

// "N1:r1,N2:r2,..." (r may be omitted when h_f = h^2).
std::vector<std::pair<int, int>> parse_schedule(const std::string& text);

inline const char* kStudyHeader = "N,r,lambda,unknowns,err_coarse,err_fine,order_coarse,order_fine";

void emit_csv(const Study& s, std::ostream& os);
void emit_json(const Study& s, std::ostream& os);
// Writes to `path` ("-" for stdout); format is "csv" or "json".
void emit(const Study& s, const std::string& format, const std::string& path);

// Published IB and IIM max errors for the circle problem, by N.
struct PublishedReference {
  int N;
  double ib, iim;
};
const std::vector<PublishedReference>& peskin_published_reference();

}  // namespace twogrid
