// Times serial against OpenMP row assembly on a tube problem and checks
// that both produce the same rows.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "twogrid/assembly.hpp"
#include "twogrid/harness.hpp"

using namespace twogrid;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int k = 0; k < reps; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool same(const RawSystem& a, const RawSystem& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    if (a.rows[k].node != b.rows[k].node || a.rows[k].rhs != b.rows[k].rhs ||
        a.rows[k].entries != b.rows[k].entries)
      return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string problem = argc > 1 ? argv[1] : "flower";
  const int N = argc > 2 ? std::atoi(argv[2]) : 80;
  const int r = argc > 3 ? std::atoi(argv[3]) : 4;
  const int reps = argc > 4 ? std::atoi(argv[4]) : 3;

  const ProblemSpec p = make_problem(problem);
  CaseConfig c;
  c.problem = problem;
  c.N = N;
  c.r = r;
  const CompositeGrid g = build_grid(p, c);

  RawSystem serial, parallel;
  const double ts = best_of(reps, [&] { serial = assemble_rows_serial(g, p); });
  const double tp = best_of(reps, [&] { parallel = assemble_rows(g, p); });
  const bool ok = same(serial, parallel);

  std::printf("problem=%s N=%d r=%d nodes=%zu rows=%zu threads=%d\n", problem.c_str(), N, r, g.size(),
              serial.rows.size(), omp_get_max_threads());
  std::printf("serial   %.4f s\nparallel %.4f s\nspeedup  %.2fx\nidentical %s\n", ts, tp, ts / tp,
              ok ? "yes" : "NO");
  return ok ? 0 : 1;
}
