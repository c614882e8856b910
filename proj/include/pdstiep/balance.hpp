#pragma once

#include "pdstiep/types.hpp"

namespace pdstiep {

struct BalanceResult {
  Matrix balanced;   ///< diag(row_scale) * A * diag(col_scale)
  Vector row_scale;
  Vector col_scale;
  int iterations = 0;
  double residual = 0.0;  ///< max deviation of a row or column sum from 1
};

/// Sinkhorn-Knopp balancing of an entrywise-positive matrix.
///
/// Alternates row and column normalization of the scaling vectors; one
/// iteration is a full row+column sweep. Returns as soon as both row and
/// column sums of the scaled matrix are within `tol` of one (possibly after
/// zero sweeps). Throws NonPositiveInput for entries <= 0 or non-finite, and
/// NotConverged after `max_iter` sweeps.
BalanceResult sinkhorn(const Matrix& A, double tol = 1e-12, int max_iter = 10000);

/// max(|Ae - e|_inf, |A^T e - e|_inf)
double doubly_stochastic_residual(const Matrix& A);

}  // namespace pdstiep
