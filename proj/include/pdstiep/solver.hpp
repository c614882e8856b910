#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pdstiep/operator.hpp"
#include "pdstiep/spectrum.hpp"
#include "pdstiep/types.hpp"

namespace pdstiep {

enum class Algorithm { Monotone, Nonmonotone };

struct SolverParams {
  double epsilon = 5e-8;    ///< stop when |F|_F < epsilon
  double sigma_max = 1e-6;  ///< regularization cap
  // monotone driver
  double eta_max = 0.1;
  double theta_min = 0.1;
  double theta_max = 0.9;
  double theta = 0.5;  ///< backtracking factor, must lie in [theta_min, theta_max]
  double t = 1e-4;     ///< sufficient decrease
  // nonmonotone driver
  double tau = 0.9;
  double rho = 0.5;
  double delta = 1e-4;
  // eta_k = 1/(k+2), gamma_k = 1/(k+2)^2
  int cg_max_iter = -1;  ///< <= 0 means n^2
  int outer_max_iter = 200;
  int linesearch_max = 60;

  static double eta_sequence(int k) { return 1.0 / (k + 2.0); }
  static double gamma_sequence(int k) { return 1.0 / ((k + 2.0) * (k + 2.0)); }

  /// Throws InputError when a parameter leaves its admissible interval.
  void validate() const;
};

enum class SolverStatus {
  Converged,
  MaxIterations,
  LineSearchFailed,
  Tol2Unreachable,
  NumericalFailure,
};

const char* to_string(SolverStatus s);
const char* to_string(Algorithm a);

struct IterationRecord {
  int iteration = 0;
  double residual = 0.0;   ///< |F(Z_k)|_F at the start of iteration k
  double step = 0.0;       ///< accepted step length (0 for the final record)
  int cg_iterations = 0;
  int backtracks = 0;
};

struct SolverReport {
  Algorithm algorithm = Algorithm::Nonmonotone;
  SolverStatus status = SolverStatus::MaxIterations;
  int outer_iterations = 0;
  int function_evaluations = 0;
  int cg_iterations_total = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  double final_gradient_norm = 0.0;
  double wall_time = 0.0;  ///< seconds, monotonic clock
  std::string message;
  std::vector<IterationRecord> trace;
};

struct SolveResult {
  Point point;
  SolverReport report;
};

struct CgResult {
  Matrix dY;
  double relative_residual = 0.0;
  int iterations = 0;
  bool stopped_by_tolerance = false;
};

/// Predicate evaluated on every CG iterate (x, residual rhs - A x); the solve
/// stops at the first iterate that meets the tolerance and the predicate.
using CgAcceptance = std::function<bool(const Matrix& x, const Matrix& r)>;

/// Conjugate gradients on (DF DF^* + sigma id) dY = rhs with the Frobenius
/// inner product, started at zero. Stops when |r|_F <= rel_tol |rhs|_F (and
/// `accept`, when given, holds) or after max_iter iterations.
/// Throws CgBreakdown if a curvature denominator is below 1e-300.
CgResult cg_normal_solve(const ResidualContext& ctx, double sigma, const Matrix& rhs,
                         double rel_tol, int max_iter, const CgAcceptance& accept = {});

/// Monotone Riemannian inexact Newton-CG.
SolveResult solve_monotone(const StructureData& sd, Point z0, const SolverParams& params = {});

/// Nonmonotone Riemannian inexact Newton-CG.
SolveResult solve_nonmonotone(const StructureData& sd, Point z0,
                              const SolverParams& params = {});

SolveResult solve(Algorithm algorithm, const StructureData& sd, Point z0,
                  const SolverParams& params = {});

/// sum_{k>=0} 1/(k+2)^2 = pi^2/6 - 1.
double gamma_sum();

}  // namespace pdstiep
