#include "pdstiep/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "pdstiep/errors.hpp"

namespace pdstiep {

namespace {

Index lowrank_p(const BenchConfig& cfg, Index n) {
  const auto p = static_cast<Index>(std::lround(cfg.p_ratio * static_cast<double>(n)));
  return std::clamp<Index>(p, 1, n - 1);
}

}  // namespace

BenchRow run_bench_cell(const BenchConfig& cfg, Algorithm algorithm, Index n,
                        std::uint64_t seed) {
  BenchRow row;
  row.algorithm = algorithm;
  row.n = n;
  row.seed = seed;
  const SampleMode mode = cfg.example == 2 ? SampleMode::LowRank : SampleMode::Dense;
  const Index p = mode == SampleMode::LowRank ? lowrank_p(cfg, n) : 0;
  if (mode == SampleMode::LowRank) row.p = p;
  try {
    const RandomProblem problem = random_problem(n, mode, p, seed);
    const StructureData sd = build_structure(problem.spectrum, cfg.layout);
    Point z0 = initial_point(sd, mode, p, seed + 1);
    const SolveResult result = solve(algorithm, sd, std::move(z0), cfg.params);
    const SolverReport& r = result.report;
    row.ct = r.wall_time;
    row.it = r.outer_iterations;
    row.nf = r.function_evaluations;
    row.ncg = r.cg_iterations_total;
    row.res = r.final_residual;
    row.grad = r.final_gradient_norm;
    row.status = r.status;
  } catch (const Error& e) {
    row.status = SolverStatus::NumericalFailure;
    row.error = e.what();
  }
  return row;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  for (Index n : cfg.sizes)
    if (n < 2) throw InputError("bench: sizes must be at least 2");
  cfg.params.validate();

  std::vector<std::tuple<Algorithm, Index, std::uint64_t>> cells;
  for (Algorithm a : cfg.algorithms)
    for (Index n : cfg.sizes)
      for (std::uint64_t seed : cfg.seeds) cells.emplace_back(a, n, seed);

  std::vector<BenchRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const auto& [a, n, seed] = cells[i];
      rows[i] = run_bench_cell(cfg, a, n, seed);
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, cfg.threads));
  if (workers == 1 || cells.size() < 2) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(workers, cells.size()); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& x, const BenchRow& y) {
    return std::tie(x.algorithm, x.n, x.seed) < std::tie(y.algorithm, y.n, y.seed);
  });
  return rows;
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %6s %6s %8s %9s %5s %5s %7s %10s %10s  %s\n", "alg", "n",
                "p", "seed", "CT.", "IT.", "NF.", "NCG.", "Res.", "grad.", "status");
  os << buf;
  for (const auto& r : rows) {
    const std::string p = r.p ? std::to_string(*r.p) : "-";
    std::snprintf(buf, sizeof buf, "%-12s %6ld %6s %8llu %9.3f %5d %5d %7d %10.2e %10.2e  %s\n",
                  to_string(r.algorithm), static_cast<long>(r.n), p.c_str(),
                  static_cast<unsigned long long>(r.seed), r.ct, r.it, r.nf, r.ncg, r.res,
                  r.grad, r.error.empty() ? to_string(r.status) : r.error.c_str());
    os << buf;
  }
  return os.str();
}

std::string bench_to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "algorithm,n,p,seed,CT.,IT.,NF.,NCG.,Res.,grad.,status,error\n";
  os.precision(17);
  for (const auto& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    os << to_string(r.algorithm) << ',' << r.n << ',' << (r.p ? std::to_string(*r.p) : "")
       << ',' << r.seed << ',' << r.ct << ',' << r.it << ',' << r.nf << ',' << r.ncg << ','
       << r.res << ',' << r.grad << ',' << to_string(r.status) << ',' << err << '\n';
  }
  return os.str();
}

int threads_from_env() {
  const char* v = std::getenv("PDSTIEP_THREADS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long t = std::strtol(v, &end, 10);
  if (end == v) return 1;
  return static_cast<int>(std::clamp<long>(t, 1, 1024));
}

}  // namespace pdstiep
