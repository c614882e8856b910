// pdstiep: command-line front end.
//
//   pdstiep solve --spectrum spec.json [--algorithm nonmonotone] [--seed 1] --out DIR
//   pdstiep balance A.csv [--out B.csv]
//   pdstiep schur A.csv
//   pdstiep subspaces C.csv [--cluster-tol 1e-6] [--q Q.csv --t T.csv]
//   pdstiep bench --example 1 --sizes 50,100 --seeds 1,2,3
//   pdstiep digraph C.csv [--threshold 1e-3] [--out G.dot]
//
// Exit codes: 0 ok, 2 bad input, 3 solver did not converge, 4 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "pdstiep/balance.hpp"
#include "pdstiep/bench.hpp"
#include "pdstiep/dense_linalg.hpp"
#include "pdstiep/digraph.hpp"
#include "pdstiep/errors.hpp"
#include "pdstiep/io.hpp"
#include "pdstiep/solver.hpp"
#include "pdstiep/spectrum.hpp"
#include "pdstiep/subspaces.hpp"

namespace fs = std::filesystem;
using namespace pdstiep;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitNumerical = 4;

void add_solver_flags(CLI::App* cmd, SolverParams& p) {
  cmd->add_option("--eps", p.epsilon, "stop when |F|_F < eps")->capture_default_str();
  cmd->add_option("--sigma-max", p.sigma_max)->capture_default_str();
  cmd->add_option("--eta-max", p.eta_max)->capture_default_str();
  cmd->add_option("--theta", p.theta, "monotone backtracking factor")->capture_default_str();
  cmd->add_option("--theta-min", p.theta_min)->capture_default_str();
  cmd->add_option("--theta-max", p.theta_max)->capture_default_str();
  cmd->add_option("--t", p.t, "monotone sufficient decrease")->capture_default_str();
  cmd->add_option("--tau", p.tau)->capture_default_str();
  cmd->add_option("--rho", p.rho)->capture_default_str();
  cmd->add_option("--delta", p.delta)->capture_default_str();
  cmd->add_option("--max-iter", p.outer_max_iter)->capture_default_str();
  cmd->add_option("--cg-max-iter", p.cg_max_iter, "<= 0 means n^2")->capture_default_str();
  cmd->add_option("--linesearch-max", p.linesearch_max)->capture_default_str();
}

const std::map<std::string, Algorithm> kAlgorithms{{"monotone", Algorithm::Monotone},
                                                   {"nonmonotone", Algorithm::Nonmonotone}};
const std::map<std::string, SampleMode> kModes{{"dense", SampleMode::Dense},
                                               {"lowrank", SampleMode::LowRank}};
const std::map<std::string, Layout> kLayouts{{"pairs-first", Layout::PairsFirst},
                                             {"unit-first", Layout::UnitFirst}};

void print_blocks(std::ostream& os, const std::vector<int>& sizes) {
  os << "# blocks:";
  for (int b : sizes) os << ' ' << b;
  os << '\n';
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive doubly stochastic inverse eigenvalue solver"};
  app.require_subcommand(1);

  // solve
  std::string spectrum_file, algorithm = "nonmonotone", mode = "dense", layout = "unit-first";
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  Index p = 0;
  SolverParams params;
  bool print_trace = false;
  auto* solve_cmd = app.add_subcommand("solve", "construct a matrix with a prescribed spectrum");
  solve_cmd->add_option("--spectrum", spectrum_file, "JSON file with an eigenvalues list")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--algorithm", algorithm)
      ->check(CLI::IsMember(kAlgorithms))
      ->capture_default_str();
  solve_cmd->add_option("--seed", seed, "starting point seed")->capture_default_str();
  solve_cmd->add_option("--mode", mode, "starting point recipe")
      ->check(CLI::IsMember(kModes))
      ->capture_default_str();
  solve_cmd->add_option("--p", p, "inner dimension for --mode lowrank");
  solve_cmd->add_option("--layout", layout, "order of the blocks of Lambda")
      ->check(CLI::IsMember(kLayouts))
      ->capture_default_str();
  solve_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
  solve_cmd->add_flag("--trace", print_trace, "print the per-iteration residuals");
  add_solver_flags(solve_cmd, params);

  // balance
  std::string matrix_file, out_file;
  double balance_tol = 1e-12;
  int balance_max_iter = 10000;
  auto* balance_cmd = app.add_subcommand("balance", "Sinkhorn-Knopp balancing");
  balance_cmd->add_option("matrix", matrix_file)->required()->check(CLI::ExistingFile);
  balance_cmd->add_option("--tol", balance_tol)->capture_default_str();
  balance_cmd->add_option("--max-iter", balance_max_iter)->capture_default_str();
  balance_cmd->add_option("--out", out_file, "balanced matrix CSV (default stdout)");

  // schur
  double schur_tol = 1e-14;
  auto* schur_cmd = app.add_subcommand("schur", "standardized real Schur form");
  schur_cmd->add_option("matrix", matrix_file)->required()->check(CLI::ExistingFile);
  schur_cmd->add_option("--tol", schur_tol, "deflation tolerance")->capture_default_str();

  // subspaces
  double cluster_tol = 1e-6;
  std::string q_file, t_file;
  auto* sub_cmd = app.add_subcommand("subspaces", "invariant subspaces from a Schur form");
  sub_cmd->add_option("matrix", matrix_file)->required()->check(CLI::ExistingFile);
  sub_cmd->add_option("--cluster-tol", cluster_tol)->capture_default_str();
  auto* q_opt = sub_cmd->add_option("--q", q_file, "use this Schur vector matrix")
                    ->check(CLI::ExistingFile);
  auto* t_opt = sub_cmd->add_option("--t", t_file, "use this quasi-triangular factor")
                    ->check(CLI::ExistingFile);
  q_opt->needs(t_opt);
  t_opt->needs(q_opt);

  // bench
  BenchConfig bench;
  bench.seeds = {1, 2, 3};
  bench.sizes = {50, 100};
  std::string bench_alg = "both", csv_file;
  bool long_run = false;
  int threads = threads_from_env();
  auto* bench_cmd = app.add_subcommand("bench", "random benchmark table");
  bench_cmd->add_option("--example", bench.example, "1 dense, 2 low rank")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  bench_cmd->add_option("--sizes", bench.sizes)->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--p-ratio", bench.p_ratio)->capture_default_str();
  bench_cmd->add_option("--seeds", bench.seeds)->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--algorithm", bench_alg)
      ->check(CLI::IsMember({"monotone", "nonmonotone", "both"}))
      ->capture_default_str();
  bench_cmd->add_flag("--long", long_run, "use n = 500, 800, 1000, 1500, 2000");
  bench_cmd->add_option("--csv", csv_file, "also write rows as CSV");
  bench_cmd->add_option("--threads", threads, "worker count (PDSTIEP_THREADS)")
      ->capture_default_str();
  add_solver_flags(bench_cmd, bench.params);

  // digraph
  double threshold = 1e-3;
  std::string graph_name = "G";
  auto* dot_cmd = app.add_subcommand("digraph", "DOT digraph of a matrix");
  dot_cmd->add_option("matrix", matrix_file)->required()->check(CLI::ExistingFile);
  dot_cmd->add_option("--threshold", threshold)->capture_default_str();
  dot_cmd->add_option("--name", graph_name)->capture_default_str();
  dot_cmd->add_option("--out", out_file, "DOT file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*solve_cmd) {
      std::vector<std::string> warnings;
      const auto raw = io::read_spectrum_file(spectrum_file);
      const Spectrum spec = parse_spectrum(raw, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      const StructureData sd = build_structure(spec, kLayouts.at(layout));
      Point z0 = initial_point(sd, kModes.at(mode), p, seed);
      const SolveResult res = solve(kAlgorithms.at(algorithm), sd, std::move(z0), params);
      fs::create_directories(out_dir);
      const SchurForm form = schur_from_point(sd, res.point);
      io::write_matrix_csv(fs::path(out_dir) / "C.csv", res.point.C);
      io::write_matrix_csv(fs::path(out_dir) / "Q.csv", form.Q);
      io::write_matrix_csv(fs::path(out_dir) / "T.csv", form.T);
      std::ofstream(fs::path(out_dir) / "report.json") << io::report_to_json(res.report);
      const auto& r = res.report;
      if (print_trace)
        for (const auto& rec : r.trace)
          std::cout << "k=" << rec.iteration << " |F|=" << rec.residual
                    << " cg=" << rec.cg_iterations << " step=" << rec.step << '\n';
      std::cout << to_string(r.algorithm) << ": " << to_string(r.status)
                << " IT=" << r.outer_iterations << " NF=" << r.function_evaluations
                << " NCG=" << r.cg_iterations_total << " Res=" << r.final_residual
                << " grad=" << r.final_gradient_norm << " CT=" << r.wall_time << "s\n";
      if (r.status == SolverStatus::NumericalFailure) return kExitNumerical;
      return r.status == SolverStatus::Converged ? 0 : kExitNotConverged;
    }

    if (*balance_cmd) {
      const BalanceResult b = sinkhorn(io::read_matrix_csv(matrix_file), balance_tol,
                                       balance_max_iter);
      std::ofstream file;
      open_out(out_file, file) << io::matrix_to_csv(b.balanced);
      (out_file.empty() ? std::cerr : std::cout)
          << "iterations=" << b.iterations << " residual=" << b.residual << '\n';
      return 0;
    }

    if (*schur_cmd) {
      const SchurForm f = real_schur(io::read_matrix_csv(matrix_file), schur_tol);
      print_blocks(std::cout, f.block_sizes);
      std::cout << "# Q\n" << io::matrix_to_csv(f.Q) << "# T\n" << io::matrix_to_csv(f.T);
      return 0;
    }

    if (*sub_cmd) {
      const Matrix C = io::read_matrix_csv(matrix_file);
      SchurForm form;
      if (!q_file.empty()) {
        form.Q = io::read_matrix_csv(q_file);
        form.T = io::read_matrix_csv(t_file);
        form.block_sizes = detect_blocks(form.T);
      } else {
        form = real_schur(C);
      }
      const BlockPartition part = partition_blocks(form, cluster_tol);
      // a supplied form is generally exact only to the solver tolerance
      if (!q_file.empty()) form = refine_schur(C, form, part);
      const SubspaceResult r = invariant_subspaces(C, form, part);
      std::cout << "# partition:";
      for (Index s : part.sizes) std::cout << ' ' << s;
      std::cout << "\n# Theta\n" << io::matrix_to_csv(r.theta) << "# residuals:";
      for (double v : block_residuals(C, r)) std::cout << ' ' << v;
      std::cout << '\n';
      return 0;
    }

    if (*bench_cmd) {
      if (long_run) bench.sizes = {500, 800, 1000, 1500, 2000};
      if (bench_alg != "both") bench.algorithms = {kAlgorithms.at(bench_alg)};
      bench.threads = threads;
      const auto rows = run_bench(bench);
      std::cout << format_bench_table(rows);
      if (!csv_file.empty()) {
        std::ofstream out(csv_file);
        if (!out) throw InputError("cannot write " + csv_file);
        out << bench_to_csv(rows);
      }
      return 0;
    }

    if (*dot_cmd) {
      std::ofstream file;
      open_out(out_file, file) << to_dot(io::read_matrix_csv(matrix_file), threshold, graph_name);
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
