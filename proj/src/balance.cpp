#include "pdstiep/balance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdstiep/errors.hpp"

namespace pdstiep {

double doubly_stochastic_residual(const Matrix& A) {
  const double rows = (A.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (A.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

BalanceResult sinkhorn(const Matrix& A, double tol, int max_iter) {
  if (A.rows() != A.cols()) throw NonSquareInput("sinkhorn: matrix is not square");
  if (A.size() == 0) throw InputError("sinkhorn: empty matrix");
  if (!(tol > 0.0)) throw InputError("sinkhorn: tolerance must be positive");
  if (!A.allFinite() || (A.array() <= 0.0).any())
    throw NonPositiveInput("sinkhorn: matrix must be entrywise positive and finite");

  const Index n = A.rows();
  BalanceResult out;
  out.row_scale = Vector::Ones(n);
  out.col_scale = Vector::Ones(n);
  out.balanced = A;
  out.residual = doubly_stochastic_residual(A);

  while (out.residual > tol) {
    if (out.iterations >= max_iter)
      throw NotConverged("sinkhorn: no convergence after " + std::to_string(max_iter) +
                             " sweeps (residual " + std::to_string(out.residual) + ")",
                         out.iterations);
    out.row_scale = (A * out.col_scale).cwiseInverse();
    out.col_scale = (A.transpose() * out.row_scale).cwiseInverse();
    ++out.iterations;
    out.balanced = out.row_scale.asDiagonal() * A * out.col_scale.asDiagonal();
    if (!out.balanced.allFinite() || (out.balanced.array() <= 0.0).any())
      throw NotConverged("sinkhorn: scaling left the positive finite range", out.iterations);
    out.residual = doubly_stochastic_residual(out.balanced);
  }
  return out;
}

}  // namespace pdstiep
