// Command-line driver: single runs, convergence studies, stencil derivation
// and grid dumps.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "json.hpp"
#include "twogrid/errors.hpp"
#include "twogrid/harness.hpp"
#include "twogrid/rational.hpp"
#include "twogrid/stencils.hpp"

using namespace twogrid;

namespace {

constexpr int kExitSign = 2;

struct CommonOpts {
  std::string problem;
  int N = 20;
  int r = 2;
  double lambda = 0.0;
  double kappa_minus = 0.0, kappa_plus = 0.0, eps = 0.0;
  std::string hf_mode;
  bool serial = false;
};

void add_common(CLI::App* app, CommonOpts& o, bool with_n) {
  app->add_option("--problem", o.problem, "benchmark name")->required();
  if (with_n) {
    app->add_option("--N", o.N, "coarse intervals per side");
    app->add_option("--r", o.r, "refinement ratio h / h_f");
  }
  app->add_option("--lambda", o.lambda, "tube half-width in coarse cells (default: problem default)");
  app->add_option("--kappa-minus", o.kappa_minus, "coefficient inside / left of the interface");
  app->add_option("--kappa-plus", o.kappa_plus, "coefficient outside / right of the interface");
  app->add_option("--eps", o.eps, "layer width parameter");
  app->add_option("--hf-mode", o.hf_mode, "use 'h2' for h_f = h^2")->check(CLI::IsMember({"h2", "ratio"}));
  app->add_flag("--serial", o.serial, "assemble without OpenMP");
}

CaseConfig to_config(const CommonOpts& o) {
  CaseConfig c;
  c.problem = o.problem;
  c.params = {o.kappa_minus, o.kappa_plus, o.eps};
  c.N = o.N;
  c.r = o.r;
  c.lambda = o.lambda;
  c.hf_square = o.hf_mode == "h2";
  c.parallel = !o.serial;
  return c;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path);
  f << body;
}

void report_m_matrix(const CaseReport& r) {
  if (r.m_matrix.ok()) return;
  std::cerr << "warning: system fails the M-matrix check (sign_ok=" << r.m_matrix.sign_ok
            << ", row_sum_ok=" << r.m_matrix.row_sum_ok << ", " << r.m_matrix.offenders.size()
            << " sign offenders, " << r.m_matrix.row_sum_offenders.size() << " row-sum offenders)\n";
}

nlohmann::json rational_array(const std::vector<Rational>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-grid finite-difference solver for elliptic interface problems"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  std::string out = "-", format = "csv", dump_matrix, dump_grid;
  auto* run = app.add_subcommand("run", "solve one case and report errors");
  add_common(run, run_opts, true);
  run->add_option("--out", out, "output path ('-' for stdout)");
  run->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--dump-matrix", dump_matrix, "write the system matrix as triplets");
  run->add_option("--dump-grid", dump_grid, "write the composite grid as JSON");

  CommonOpts study_opts;
  std::string schedule, study_out = "-", study_format = "csv", order_base = "h";
  auto* study = app.add_subcommand("study", "convergence study over a schedule of (N, r)");
  add_common(study, study_opts, false);
  study->add_option("--schedule", schedule, "N1:r1,N2:r2,...")->required();
  study->add_option("--out", study_out, "output path ('-' for stdout)");
  study->add_option("--format", study_format)->check(CLI::IsMember({"csv", "json"}));
  study->add_option("--order-base", order_base, "orders against h or h_f")->check(CLI::IsMember({"h", "hf"}));

  std::string kind = "hanging";
  int dr = 2, dj = 1;
  std::string h1 = "1", h2 = "1", hy = "1";
  auto* derive = app.add_subcommand("derive-stencil", "derive stencil coefficients as exact rationals");
  derive->add_option("--kind", kind)->check(CLI::IsMember({"hanging", "border1d", "border2d"}));
  derive->add_option("--r", dr, "refinement ratio (hanging)");
  derive->add_option("--j", dj, "offset of the hanging node (hanging)");
  derive->add_option("--h1", h1, "left spacing (border)");
  derive->add_option("--h2", h2, "right spacing (border)");
  derive->add_option("--hy", hy, "vertical spacing (border2d)");

  CommonOpts grid_opts;
  std::string grid_out = "-";
  auto* grid = app.add_subcommand("dump-grid", "build a composite grid and print it as JSON");
  add_common(grid, grid_opts, true);
  grid->add_option("--out", grid_out, "output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) {
      const CaseConfig c = to_config(run_opts);
      CaseArtifacts art;
      const CaseReport rep = run_case(c, &art);
      if (!dump_matrix.empty()) {
        std::ofstream f(dump_matrix);
        if (!f) throw Error(ErrorKind::Io, "cannot open " + dump_matrix);
        write_triplets(art.system, f);
      }
      if (!dump_grid.empty()) write_file(dump_grid, grid_to_json(art.grid) + "\n");
      emit(study_from_reports(c.problem, {rep}), format, out);
      report_m_matrix(rep);
      return rep.m_matrix.ok() ? 0 : kExitSign;
    }
    if (*study) {
      const CaseConfig c = to_config(study_opts);
      const Study s = convergence_study(c, parse_schedule(schedule),
                                        order_base == "hf" ? OrderBase::Fine : OrderBase::Coarse);
      emit(s, study_format, study_out);
      for (const auto& row : s.rows) {
        if (!row.m_matrix_ok) {
          std::cerr << "warning: N=" << row.N << " r=" << row.r << " fails the M-matrix check\n";
          return kExitSign;
        }
      }
      return 0;
    }
    if (*derive) {
      nlohmann::json j;
      LocalStencil<Rational> s;
      if (kind == "hanging") {
        s = derive_hanging_coeffs(dr, dj);
        j["layout"] = {"(0,-h)", "(h,-h)", "(0,0)", "(h,0)", "(0,+h)", "(h,+h)", "hanging"};
        j["r"] = dr;
        j["j"] = dj;
      } else if (kind == "border1d") {
        s = derive_border_1d(parse_rational(h1), parse_rational(h2));
        j["layout"] = {"left", "centre", "right"};
      } else {
        s = derive_border_2d(parse_rational(h1), parse_rational(h2), parse_rational(hy));
        j["layout"] = "3x3, index 3*(dj+1)+(di+1), bottom row first";
      }
      j["kind"] = kind;
      j["alpha"] = rational_array(s.alpha);
      j["beta"] = rational_array(s.beta);
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (*grid) {
      const CaseConfig c = to_config(grid_opts);
      const ProblemSpec p = make_problem(c.problem, c.params);
      const std::string body = grid_to_json(build_grid(p, c)) + "\n";
      if (grid_out == "-") {
        std::cout << body;
      } else {
        write_file(grid_out, body);
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.detail() << '\n';
    return e.kind() == ErrorKind::SignViolation ? kExitSign : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
