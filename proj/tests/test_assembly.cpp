#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "twogrid/assembly.hpp"
#include "twogrid/errors.hpp"
#include "twogrid/harness.hpp"
#include "twogrid/linsolve.hpp"

using namespace twogrid;

namespace {

CaseConfig cfg(const std::string& name, int N, int r) {
  CaseConfig c;
  c.problem = name;
  c.N = N;
  c.r = r;
  return c;
}

bool same_rows(const RawSystem& a, const RawSystem& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (x.node != y.node || x.entries != y.entries) return false;
    if (std::memcmp(&x.rhs, &y.rhs, sizeof(double)) != 0) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("assembly") {
  TEST_CASE("1D system dimension") {
    const ProblemSpec p = make_problem("piecewise_kappa_1d");
    const auto g = build_grid(p, cfg(p.name, 10, 8));
    const auto s = assemble(g, p);
    CHECK(g.size() == 32);
    CHECK(s.matrix.rows() == 30);
    CHECK(s.rhs.size() == 30);
  }

  TEST_CASE("constant solution is reproduced") {
    for (const char* name : {"peskin_circle", "flower", "piecewise_kappa_1d", "line_interface_2d"}) {
      CAPTURE(name);
      // the (1,10) flower hits a sign violation on this coarse grid
      ProblemSpec p = make_problem(name, std::string(name) == "flower" ? ProblemParams{50, 1, 0} : ProblemParams{});
      p.f = [](Point, Side) { return 0.0; };
      p.jumps = JumpData{};
      p.boundary = [](Point) { return 1.0; };
      p.exact = [](Point, Side) { return Jet(1.0); };
      CaseConfig c = cfg(name, 20, 4);
      if (std::string(name) == "line_interface_2d") c.N = 12;
      const auto g = build_grid(p, c);
      const auto s = assemble(g, p);
      const auto x = solve(s);
      for (Eigen::Index i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - 1.0) < 1e-11);
    }
  }

  TEST_CASE("circle system solves to the residual bound") {
    const ProblemSpec p = make_problem("peskin_circle");
    const auto g = build_grid(p, cfg(p.name, 20, 2));
    const auto s = assemble(g, p);
    SolveInfo info;
    solve(s, 1e-12, &info);
    CHECK(info.residual < 1e-12);
  }

  TEST_CASE("zero boundary data leaves the right-hand side alone") {
    ProblemSpec p = make_problem("peskin_circle");
    const auto g = build_grid(p, cfg(p.name, 20, 2));
    const RawSystem raw = assemble_rows(g, p);
    const auto s = apply_dirichlet(raw, g, [](Point) { return 0.0; });
    for (std::size_t i = 0; i < raw.rows.size(); ++i) CHECK(s.rhs[static_cast<Eigen::Index>(i)] == raw.rows[i].rhs);
  }

  TEST_CASE("boundary data of the fixtures") {
    const ProblemSpec p = make_problem("piecewise_kappa_1d");
    const double a = 17.0 / 30.0, km = 4.0, kp = 50.0;
    CHECK(std::abs(p.boundary({0, 0})) < 1e-15);
    CHECK(p.boundary({1, 0}) == doctest::Approx(1 / kp + (1 / km - 1 / kp) * std::pow(a, 4)));
    const ProblemSpec l = make_problem("line_interface_2d");
    const double al = 33.0 / 70.0;
    CHECK(l.boundary({0.2, 0.0}) == doctest::Approx(0.2 * (al - 1)));
    CHECK(l.boundary({0.0, 0.3}) == doctest::Approx(std::sin(M_PI * 0.3)));
    CHECK(l.boundary({1.0, 0.3}) == doctest::Approx(std::sin(M_PI * 0.3)));
  }

  TEST_CASE("parallel and serial assembly are bit-identical") {
    for (auto [name, km, kp] : {std::tuple{"peskin_circle", 0.0, 0.0}, {"flower", 50.0, 1.0}, {"internal_layer", 0.0, 0.0}}) {
      CAPTURE(name);
      const ProblemSpec p = make_problem(name, {km, kp, 0});
      const auto g = build_grid(p, cfg(name, 40, 4));
      CHECK(same_rows(assemble_rows(g, p), assemble_rows_serial(g, p)));
      CHECK(same_rows(assemble_rows(g, p), assemble_rows(g, p)));
      std::ostringstream a, b;
      write_triplets(assemble(g, p, true), a);
      write_triplets(assemble(g, p, false), b);
      CHECK(a.str() == b.str());
    }
  }

  TEST_CASE("right-hand side is linear in the source") {
    ProblemSpec p = make_problem("peskin_circle");
    p.jumps = JumpData{};
    p.boundary = [](Point) { return 0.0; };
    const auto g = build_grid(p, cfg(p.name, 20, 4));
    SideField f1 = [](Point q, Side) { return std::sin(q.x); };
    SideField f2 = [](Point q, Side) { return q.y * q.y; };
    p.f = f1;
    const auto s1 = assemble(g, p);
    p.f = f2;
    const auto s2 = assemble(g, p);
    p.f = [&](Point q, Side s) { return f1(q, s) + f2(q, s); };
    const auto s3 = assemble(g, p);
    CHECK((s3.rhs - s1.rhs - s2.rhs).lpNorm<Eigen::Infinity>() <= 1e-13 * s3.rhs.lpNorm<Eigen::Infinity>());
    CHECK((RowMatrix(s3.matrix - s1.matrix)).norm() == 0.0);
  }

  TEST_CASE("benchmark systems are M-matrices") {
    struct C {
      const char* name;
      double km, kp;
      int N, r;
    };
    for (const C c : {C{"piecewise_kappa_1d", 0, 0, 10, 8}, C{"peskin_circle", 0, 0, 20, 2}, C{"peskin_circle", 0, 0, 40, 4},
                      C{"flower", 1, 10, 80, 4}, C{"flower", 50, 1, 40, 4}, C{"internal_layer", 0, 0, 40, 4},
                      C{"line_interface_2d", 0, 0, 12, 2}}) {
      CAPTURE(c.name);
      CAPTURE(c.N);
      const ProblemSpec p = make_problem(c.name, {c.km, c.kp, 0});
      const auto g = build_grid(p, cfg(c.name, c.N, c.r));
      const auto rep = verify_m_matrix(assemble(g, p));
      CHECK(rep.sign_ok);
      CHECK(rep.row_sum_ok);
    }
  }

  TEST_CASE("strip stencil loses the sign property once the aspect ratio passes sqrt 6") {
    const ProblemSpec p = make_problem("line_interface_2d");
    for (int r : {4, 8}) {
      CAPTURE(r);
      const auto g = build_grid(p, cfg(p.name, 12, r));
      const auto rep = verify_m_matrix(assemble(g, p));
      CHECK_FALSE(rep.sign_ok);
    }
  }

  TEST_CASE("stencil failures carry the node location") {
    const ProblemSpec p = make_problem("flower", {1, 10, 0});
    const auto g = build_grid(p, cfg("flower", 40, 2));
    try {
      assemble(g, p);
      FAIL("expected a sign violation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SignViolation);
      CHECK(e.detail().find('(') != std::string::npos);
    }
  }
}

TEST_SUITE("linsolve") {
  TEST_CASE("identity system") {
    SparseSystem s;
    s.matrix.resize(4, 4);
    for (int i = 0; i < 4; ++i) s.matrix.insert(i, i) = 1.0;
    s.matrix.makeCompressed();
    s.rhs = Eigen::VectorXd::LinSpaced(4, 1, 4);
    const auto x = solve(s);
    CHECK((x - s.rhs).norm() == 0.0);
  }

  TEST_CASE("singular system is reported") {
    SparseSystem s;
    s.matrix.resize(2, 2);
    s.matrix.insert(0, 0) = 1.0;
    s.matrix.insert(0, 1) = 1.0;
    s.matrix.insert(1, 0) = 1.0;
    s.matrix.insert(1, 1) = 1.0;
    s.rhs = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_AS(solve(s), Error);
  }

  TEST_CASE("1D benchmark residual") {
    const ProblemSpec p = make_problem("piecewise_kappa_1d");
    const auto g = build_grid(p, cfg(p.name, 10, 8));
    SolveInfo info;
    solve(assemble(g, p), 1e-12, &info);
    CHECK(info.residual <= 1e-12);
  }

  TEST_CASE("M-matrix check flags a flipped off-diagonal") {
    const ProblemSpec p = make_problem("peskin_circle");
    const auto g = build_grid(p, cfg(p.name, 20, 2));
    RowMatrix A = assemble(g, p).matrix;
    CHECK(verify_m_matrix(A).ok());
    int row = -1, col = -1;
    for (int i = 0; i < A.outerSize() && row < 0; ++i)
      for (RowMatrix::InnerIterator it(A, i); it; ++it)
        if (it.col() != i && it.value() > 0) {
          row = i;
          col = static_cast<int>(it.col());
          it.valueRef() = -it.value();
          break;
        }
    REQUIRE(row >= 0);
    const auto rep = verify_m_matrix(A);
    CHECK_FALSE(rep.sign_ok);
    bool listed = false;
    for (const auto& e : rep.offenders) listed = listed || (e.row == row && e.col == col);
    CHECK(listed);
  }

  TEST_CASE("row sums on the circle problem") {
    const ProblemSpec p = make_problem("peskin_circle");
    const auto g = build_grid(p, cfg(p.name, 40, 4));
    CHECK(verify_m_matrix(assemble(g, p)).row_sum_ok);
  }

  TEST_CASE("comparison principle") {
    const ProblemSpec p = make_problem("peskin_circle");
    const auto g = build_grid(p, cfg(p.name, 20, 2));
    SparseSystem s = assemble(g, p);
    const Eigen::VectorXd x1 = solve(s);
    std::srand(5);
    for (int t = 0; t < 5; ++t) {
      // rhs grows elementwise, so the solution must not
      const Eigen::VectorXd d = (Eigen::VectorXd::Random(s.rhs.size()).array() + 1.0) * 0.5;
      SparseSystem s2 = s;
      s2.rhs = s.rhs + d;
      const Eigen::VectorXd x2 = solve(s2);
      CHECK((x1 - x2).minCoeff() >= -1e-12);
    }
  }
}
