#pragma once

#include <utility>
#include <vector>

#include "pdstiep/manifolds.hpp"
#include "pdstiep/spectrum.hpp"
#include "pdstiep/types.hpp"

namespace pdstiep {

/// (A(W))_{col,row} = -b_k^2 / W_{row,col} for each pair slot k = (row, col).
/// Throws ZeroDenominator when a slot entry is <= 1e-300.
Matrix apply_A(const StructureData& sd, const Matrix& W);

/// F(Z) = C - Q (Lambda + A(W) + W + V) Q^T.
Matrix residual_F(const StructureData& sd, const Point& z);

/// Linearization of F at a fixed point. Caches the quasi-triangular factor
/// X = Lambda + A(W) + W + V, its conjugation P = Q X Q^T, the residual and
/// the doubly stochastic projector, so that repeated differential/adjoint
/// evaluations cost a handful of dense products each.
///
/// All const members are safe to call concurrently.
class ResidualContext {
 public:
  ResidualContext(const StructureData& sd, Point z);

  const StructureData& structure() const { return sd_; }
  const Point& point() const { return z_; }
  const Matrix& inner_factor() const { return X_; }
  const Matrix& conjugated() const { return P_; }
  const Matrix& residual() const { return F_; }
  double residual_norm() const { return residual_norm_; }
  double merit() const { return 0.5 * residual_norm_ * residual_norm_; }

  /// DF(Z)[dZ] = dC + [P, dQ Q^T] - Q((B_W .* dW)^T + dW + dV) Q^T.
  Matrix differential(const TangentVector& dz) const;

  /// Metric adjoint DF(Z)^*[dY].
  TangentVector adjoint(const Matrix& dY) const;

  /// Riemannian gradient of f = |F|^2 / 2, i.e. DF^*[F].
  TangentVector gradient() const { return adjoint(F_); }

  /// (DF o DF^* + sigma id)[dY], evaluated in the Schur frame of Q.
  Matrix normal_apply(double sigma, const Matrix& dY) const;

  /// B_W: b_k^2 / W^2 on the pair slots.
  const Matrix& bw() const { return Bw_; }

 private:
  Matrix upper_times(const Matrix& M) const;  // X * M
  Matrix times_upper(const Matrix& M) const;  // M * X

  StructureData sd_;
  Point z_;
  Matrix X_;
  Matrix X_upper_;
  std::vector<std::pair<Index, double>> X_subdiag_;  // (row, value) at (row, row-1)
  Matrix P_;
  Matrix F_;
  Matrix Bw_;
  double residual_norm_ = 0.0;
  DoublyStochasticProjector projector_;
};

Matrix differential_DF(const StructureData& sd, const Point& z, const TangentVector& dz);
TangentVector adjoint_DF(const StructureData& sd, const Point& z, const Matrix& dY);
TangentVector gradient(const StructureData& sd, const Point& z);
double merit(const StructureData& sd, const Point& z);
Matrix normal_apply(const StructureData& sd, const Point& z, double sigma, const Matrix& dY);

}  // namespace pdstiep
