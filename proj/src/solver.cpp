#include "pdstiep/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <optional>

#include "pdstiep/errors.hpp"
#include "pdstiep/manifolds.hpp"

namespace pdstiep {

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return "Converged";
    case SolverStatus::MaxIterations: return "MaxIterations";
    case SolverStatus::LineSearchFailed: return "LineSearchFailed";
    case SolverStatus::Tol2Unreachable: return "Tol2Unreachable";
    case SolverStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

const char* to_string(Algorithm a) {
  return a == Algorithm::Monotone ? "monotone" : "nonmonotone";
}

double gamma_sum() { return std::numbers::pi * std::numbers::pi / 6.0 - 1.0; }

void SolverParams::validate() const {
  auto open01 = [](double v) { return v > 0.0 && v < 1.0; };
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (!open01(sigma_max)) throw InputError("sigma_max must lie in (0, 1)");
  if (!open01(eta_max)) throw InputError("eta_max must lie in (0, 1)");
  if (!open01(t)) throw InputError("t must lie in (0, 1)");
  if (!(0.0 < theta_min && theta_min < theta_max && theta_max < 1.0))
    throw InputError("need 0 < theta_min < theta_max < 1");
  if (theta < theta_min || theta > theta_max)
    throw InputError("theta must lie in [theta_min, theta_max]");
  if (!open01(tau)) throw InputError("tau must lie in (0, 1)");
  if (!open01(rho)) throw InputError("rho must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 0.5)) throw InputError("delta must lie in (0, 1/2)");
  if (outer_max_iter < 0) throw InputError("outer_max_iter must be non-negative");
  if (linesearch_max < 0) throw InputError("linesearch_max must be non-negative");
}

CgResult cg_normal_solve(const ResidualContext& ctx, double sigma, const Matrix& rhs,
                         double rel_tol, int max_iter, const CgAcceptance& accept) {
  if (!(sigma > 0.0)) throw InputError("cg_normal_solve: sigma must be positive");
  const double rhs_norm = rhs.norm();
  CgResult out;
  out.dY = Matrix::Zero(rhs.rows(), rhs.cols());
  if (rhs_norm == 0.0) {
    out.stopped_by_tolerance = true;
    return out;
  }
  Matrix r = rhs;
  Matrix p = r;
  double rr = r.squaredNorm();
  auto done = [&] {
    return std::sqrt(rr) <= rel_tol * rhs_norm && (!accept || accept(out.dY, r));
  };
  while (out.iterations < max_iter && !done()) {
    const Matrix Ap = ctx.normal_apply(sigma, p);
    const double curvature = (p.array() * Ap.array()).sum();
    if (!(std::abs(curvature) >= 1e-300))
      throw CgBreakdown("cg_normal_solve: vanishing curvature");
    const double alpha = rr / curvature;
    out.dY += alpha * p;
    r -= alpha * Ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    ++out.iterations;
  }
  out.stopped_by_tolerance = done();
  out.relative_residual = std::sqrt(rr) / rhs_norm;
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Trial {
  std::optional<Point> point;
  double residual = std::numeric_limits<double>::infinity();
};

// Retraction failures (Sinkhorn breakdown on an oversized C step, singular
// Q + xi) count as a rejected trial; the caller shrinks the step.
Trial try_step(const StructureData& sd, const Point& base, const TangentVector& step,
               int& evaluations) {
  Trial trial;
  try {
    Point next = product_retract(sd, base, step);
    ++evaluations;
    const double res = residual_F(sd, next).norm();
    if (std::isfinite(res)) {
      trial.residual = res;
      trial.point = std::move(next);
    }
  } catch (const NumericalError&) {
  } catch (const InputError&) {
  }
  return trial;
}

class Driver {
 public:
  Driver(Algorithm algorithm, const StructureData& sd, Point z0, const SolverParams& params)
      : sd_(sd), params_(params), z_(std::move(z0)), start_(Clock::now()) {
    params_.validate();
    report_.algorithm = algorithm;
    const long n2 = static_cast<long>(sd.n) * static_cast<long>(sd.n);
    cg_cap_ = params.cg_max_iter > 0 ? params.cg_max_iter : static_cast<int>(std::max(1L, n2));
  }

  SolveResult run() {
    try {
      loop();
    } catch (const NumericalError& e) {
      report_.status = SolverStatus::NumericalFailure;
      report_.message = e.what();
    }
    finish();
    return {std::move(z_), std::move(report_)};
  }

 private:
  void loop() {
    for (int k = 0;; ++k) {
      ResidualContext ctx(sd_, z_);
      if (k == 0) {
        ++report_.function_evaluations;
        report_.initial_residual = ctx.residual_norm();
      }
      const double res = ctx.residual_norm();
      report_.trace.push_back({k, res, 0.0, 0, 0});
      report_.outer_iterations = k;
      report_.final_residual = res;
      if (res < params_.epsilon) {
        report_.status = SolverStatus::Converged;
        final_ctx_.emplace(std::move(ctx));
        return;
      }
      if (k >= params_.outer_max_iter) {
        report_.status = SolverStatus::MaxIterations;
        report_.message = "outer iteration cap reached";
        final_ctx_.emplace(std::move(ctx));
        return;
      }
      const bool ok = report_.algorithm == Algorithm::Monotone ? monotone_step(ctx, k)
                                                                : nonmonotone_step(ctx, k);
      if (!ok) {
        final_ctx_.emplace(std::move(ctx));
        return;
      }
    }
  }

  // Inexact Newton step with strict descent requirement and backtracking on
  // |F(R(dZ))| <= (1 - t(1 - eta)) |F|.
  bool monotone_step(const ResidualContext& ctx, int k) {
    const double res = ctx.residual_norm();
    const double sigma = std::min(params_.sigma_max, res);
    const double eta_bar = std::min(params_.eta_max, res);
    const Matrix rhs = -ctx.residual();
    const Matrix& F = ctx.residual();
    // strict decrease of the unregularized model: |DF DF^* dY + F| < |F|,
    // and DF DF^* dY + F = -(r + sigma dY) for the CG residual r.
    auto strict = [&](const Matrix& x, const Matrix& r) {
      return (r + sigma * x).norm() < res;
    };
    const CgResult cg = cg_normal_solve(ctx, sigma, rhs, eta_bar, cg_cap_, strict);
    report_.cg_iterations_total += cg.iterations;
    report_.trace.back().cg_iterations = cg.iterations;
    const Matrix model = ctx.normal_apply(0.0, cg.dY) + F;
    if (!(model.norm() < res)) {
      report_.status = SolverStatus::Tol2Unreachable;
      report_.message = "CG reached its cap without a strictly decreasing model residual";
      return false;
    }

    TangentVector dz = ctx.adjoint(cg.dY);
    double eta = model.norm() / res;
    double step = 1.0;
    for (int l = 0;; ++l) {
      Trial trial = try_step(sd_, z_, dz, report_.function_evaluations);
      if (trial.point && trial.residual <= (1.0 - params_.t * (1.0 - eta)) * res) {
        accept(std::move(*trial.point), step, l);
        return true;
      }
      if (l >= params_.linesearch_max) break;
      dz *= params_.theta;
      step *= params_.theta;
      eta = 1.0 - params_.theta * (1.0 - eta);
    }
    report_.status = SolverStatus::LineSearchFailed;
    report_.message = "no sufficient decrease after backtracking";
    (void)k;
    return false;
  }

  // Inexact Newton step with the nonmonotone acceptance test
  // |F(R(a dZ))|^2 - |F|^2 <= -delta a^2 |<grad f, dZ>| + gamma_k |F|^2.
  bool nonmonotone_step(const ResidualContext& ctx, int k) {
    const double res = ctx.residual_norm();
    const double sigma = std::min(params_.sigma_max, res);
    const double eta_bar = std::min(SolverParams::eta_sequence(k), res);
    const CgResult cg = cg_normal_solve(ctx, sigma, -ctx.residual(), eta_bar, cg_cap_);
    report_.cg_iterations_total += cg.iterations;
    report_.trace.back().cg_iterations = cg.iterations;

    const TangentVector dz = ctx.adjoint(cg.dY);
    const Point& base = ctx.point();
    const double slope = std::abs(product_inner(sd_, base, ctx.gradient(), dz));
    const double gamma = SolverParams::gamma_sequence(k);

    Trial full = try_step(sd_, z_, dz, report_.function_evaluations);
    if (full.point && full.residual <= params_.tau * res) {
      accept(std::move(*full.point), 1.0, 0);
      return true;
    }
    double alpha = 1.0;
    for (int l = 0;; ++l) {
      Trial trial = l == 0 ? std::move(full)
                           : try_step(sd_, z_, alpha * dz, report_.function_evaluations);
      if (trial.point) {
        const double lhs = trial.residual * trial.residual - res * res;
        const double rhs = -params_.delta * alpha * alpha * slope + gamma * res * res;
        if (lhs <= rhs) {
          accept(std::move(*trial.point), alpha, l);
          return true;
        }
      }
      if (l >= params_.linesearch_max) break;
      alpha *= params_.rho;
    }
    report_.status = SolverStatus::LineSearchFailed;
    report_.message = "nonmonotone line search exhausted its cap";
    return false;
  }

  void accept(Point next, double step, int backtracks) {
    report_.trace.back().step = step;
    report_.trace.back().backtracks = backtracks;
    z_ = std::move(next);
  }

  void finish() {
    try {
      if (!final_ctx_) final_ctx_.emplace(sd_, z_);
      report_.final_residual = final_ctx_->residual_norm();
      report_.final_gradient_norm = product_norm(sd_, z_, final_ctx_->gradient());
    } catch (const Error&) {
      report_.final_gradient_norm = std::numeric_limits<double>::quiet_NaN();
    }
    report_.wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
  }

  const StructureData& sd_;
  SolverParams params_;
  Point z_;
  Clock::time_point start_;
  SolverReport report_;
  int cg_cap_ = 1;
  std::optional<ResidualContext> final_ctx_;
};

}  // namespace

SolveResult solve_monotone(const StructureData& sd, Point z0, const SolverParams& params) {
  return Driver(Algorithm::Monotone, sd, std::move(z0), params).run();
}

SolveResult solve_nonmonotone(const StructureData& sd, Point z0, const SolverParams& params) {
  return Driver(Algorithm::Nonmonotone, sd, std::move(z0), params).run();
}

SolveResult solve(Algorithm algorithm, const StructureData& sd, Point z0,
                  const SolverParams& params) {
  return Driver(algorithm, sd, std::move(z0), params).run();
}

}  // namespace pdstiep
