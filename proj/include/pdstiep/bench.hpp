#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdstiep/solver.hpp"

namespace pdstiep {

struct BenchRow {
  Algorithm algorithm = Algorithm::Nonmonotone;
  Index n = 0;
  std::optional<Index> p;
  std::uint64_t seed = 0;
  double ct = 0.0;
  int it = 0;
  int nf = 0;
  int ncg = 0;
  double res = 0.0;
  double grad = 0.0;
  SolverStatus status = SolverStatus::MaxIterations;
  std::string error;  ///< non-empty when the cell threw instead of solving
};

struct BenchConfig {
  int example = 1;  ///< 1: dense random spectrum, 2: low-rank (multiple zeros)
  std::vector<Index> sizes;
  double p_ratio = 0.25;
  std::vector<std::uint64_t> seeds;
  std::vector<Algorithm> algorithms{Algorithm::Monotone, Algorithm::Nonmonotone};
  SolverParams params;
  Layout layout = Layout::UnitFirst;
  int threads = 1;
};

/// Solves one bench cell: problem from `seed`, starting point from seed + 1.
BenchRow run_bench_cell(const BenchConfig& cfg, Algorithm algorithm, Index n,
                        std::uint64_t seed);

/// Every (algorithm, n, seed) cell; rows sorted by algorithm, n, seed.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

std::string format_bench_table(const std::vector<BenchRow>& rows);
std::string bench_to_csv(const std::vector<BenchRow>& rows);

/// Worker count from PDSTIEP_THREADS (default 1, clamped to >= 1).
int threads_from_env();

}  // namespace pdstiep
