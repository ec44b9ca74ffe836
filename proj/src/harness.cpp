#include "twogrid/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "twogrid/errors.hpp"

namespace twogrid {

CompositeGrid build_grid(const ProblemSpec& p, const CaseConfig& c) {
  GridParams gp;
  gp.N = c.N;
  gp.r = c.r;
  gp.hf_square = c.hf_square;
  gp.lambda = c.lambda > 0.0 ? c.lambda : p.default_lambda;
  gp.domain = p.domain;
  switch (p.recipe) {
    case GridRecipe::IntervalInterface:
      return build_two_grid_1d(gp, p.alpha);
    case GridRecipe::IntervalLayer: {
      const double h = (p.domain.b - p.domain.a) / gp.N;
      return build_refined_interval_1d(gp, p.domain.b - gp.lambda * h, p.domain.b);
    }
    case GridRecipe::Line:
      return build_line_two_grid_2d(gp, p.alpha);
    case GridRecipe::Tube:
      return build_tube_two_grid_2d(gp, p.level_set, p.has_interface);
  }
  throw Error(ErrorKind::BadParams, "unknown grid recipe");
}

CaseReport run_case(const ProblemSpec& p, const CaseConfig& c, CaseArtifacts* out) {
  const auto t0 = std::chrono::steady_clock::now();
  CaseReport rep;
  rep.config = c;
  CaseArtifacts local;
  CaseArtifacts& a = out ? *out : local;
  a.grid = build_grid(p, c);
  rep.lambda = a.grid.lambda;
  rep.h = a.grid.h;
  rep.h_f = a.grid.h_f;
  rep.nodes = a.grid.size();
  a.system = assemble(a.grid, p, c.parallel);
  rep.unknowns = a.system.row_to_node.size();
  rep.m_matrix = verify_m_matrix(a.system);
  const Eigen::VectorXd x = solve(a.system, 1e-12, &rep.solve);
  a.solution = expand_solution(a.system, a.grid, x, p.boundary);
  rep.has_exact = p.has_exact();
  if (rep.has_exact) rep.err = exact_error(p, a.grid, a.solution);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

CaseReport run_case(const CaseConfig& c, CaseArtifacts* out) {
  const ProblemSpec p = make_problem(c.problem, c.params);
  return run_case(p, c, out);
}

double observed_order(double e1, double e2, double h1, double h2) {
  if (!(e1 > 0.0 && e2 > 0.0) || h1 == h2) return std::numeric_limits<double>::quiet_NaN();
  return std::log(e1 / e2) / std::log(h1 / h2);
}

Study study_from_reports(const std::string& problem, const std::vector<CaseReport>& reports, OrderBase base) {
  Study s;
  s.problem = problem;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double sum_c = 0.0, sum_f = 0.0;
  int n_c = 0, n_f = 0;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const CaseReport& r = reports[k];
    StudyRow row;
    row.N = r.config.N;
    row.r = static_cast<int>(std::lround(r.h / r.h_f));
    row.lambda = r.lambda;
    row.unknowns = r.unknowns;
    row.err_coarse = r.err.err_coarse;
    row.err_fine = r.err.err_fine;
    row.h = r.h;
    row.h_f = r.h_f;
    row.m_matrix_ok = r.m_matrix.ok();
    row.order_coarse = row.order_fine = nan;
    if (k > 0) {
      const CaseReport& q = reports[k - 1];
      const double h1 = base == OrderBase::Coarse ? q.h : q.h_f;
      const double h2 = base == OrderBase::Coarse ? r.h : r.h_f;
      row.order_coarse = observed_order(q.err.err_coarse, r.err.err_coarse, h1, h2);
      row.order_fine = observed_order(q.err.err_fine, r.err.err_fine, h1, h2);
      if (std::isfinite(row.order_coarse)) sum_c += row.order_coarse, ++n_c;
      if (std::isfinite(row.order_fine)) sum_f += row.order_fine, ++n_f;
    }
    s.rows.push_back(row);
  }
  s.average_order_coarse = n_c ? sum_c / n_c : nan;
  s.average_order_fine = n_f ? sum_f / n_f : nan;
  return s;
}

Study convergence_study(const CaseConfig& base, const std::vector<std::pair<int, int>>& schedule,
                        OrderBase order_base) {
  if (schedule.size() < 2) throw Error(ErrorKind::BadParams, "a study needs at least two schedule entries");
  const ProblemSpec p = make_problem(base.problem, base.params);
  std::vector<CaseReport> reports;
  for (const auto& [N, r] : schedule) {
    CaseConfig c = base;
    c.N = N;
    c.r = r;
    reports.push_back(run_case(p, c));
  }
  return study_from_reports(base.problem, reports, order_base);
}

std::vector<std::pair<int, int>> parse_schedule(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    int N = 0, r = 0;
    char extra = 0;
    const auto colon = item.find(':');
    const std::string ns = item.substr(0, colon);
    const std::string rs = colon == std::string::npos ? "0" : item.substr(colon + 1);
    if (std::sscanf(ns.c_str(), "%d%c", &N, &extra) != 1 || std::sscanf(rs.c_str(), "%d%c", &r, &extra) != 1 ||
        N <= 0 || r < 0)
      throw Error(ErrorKind::BadParams, "bad schedule entry '" + item + "'");
    out.emplace_back(N, r);
  }
  if (out.empty()) throw Error(ErrorKind::BadParams, "empty schedule");
  return out;
}

namespace {

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

void emit_csv(const Study& s, std::ostream& os) {
  os << kStudyHeader << '\n';
  for (const StudyRow& r : s.rows) {
    os << r.N << ',' << r.r << ',' << g6(r.lambda) << ',' << r.unknowns << ',' << g6(r.err_coarse) << ','
       << g6(r.err_fine) << ',' << g6(r.order_coarse) << ',' << g6(r.order_fine) << '\n';
  }
}

void emit_json(const Study& s, std::ostream& os) {
  nlohmann::json j;
  j["problem"] = s.problem;
  j["rows"] = nlohmann::json::array();
  for (const StudyRow& r : s.rows) {
    j["rows"].push_back({{"N", r.N},
                         {"r", r.r},
                         {"lambda", r.lambda},
                         {"unknowns", r.unknowns},
                         {"err_coarse", num(r.err_coarse)},
                         {"err_fine", num(r.err_fine)},
                         {"order_coarse", num(r.order_coarse)},
                         {"order_fine", num(r.order_fine)},
                         {"m_matrix_ok", r.m_matrix_ok}});
  }
  j["average_order_coarse"] = num(s.average_order_coarse);
  j["average_order_fine"] = num(s.average_order_fine);
  if (s.problem == "peskin_circle") {
    nlohmann::json ref = nlohmann::json::array();
    for (const auto& p : peskin_published_reference()) ref.push_back({{"N", p.N}, {"IB", p.ib}, {"IIM", p.iim}});
    j["published_reference"] = {{"note", "published IB and IIM errors, not recomputed"}, {"rows", ref}};
  }
  os << j.dump(2) << '\n';
}

void emit(const Study& s, const std::string& format, const std::string& path) {
  if (format != "csv" && format != "json") throw Error(ErrorKind::BadParams, "format must be csv or json");
  auto write = [&](std::ostream& os) { format == "csv" ? emit_csv(s, os) : emit_json(s, os); };
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path);
  write(f);
  if (!f) throw Error(ErrorKind::Io, "write failed for " + path);
}

const std::vector<PublishedReference>& peskin_published_reference() {
  static const std::vector<PublishedReference> ref = {
      {20, 3.614e-1, 2.3908e-3},  {40, 2.6467e-2, 8.3461e-3},  {80, 1.3204e-2, 2.4451e-4},
      {160, 6.6847e-3, 6.6573e-4}, {320, 3.3393e-3, 1.5672e-5},
  };
  return ref;
}

}  // namespace twogrid
