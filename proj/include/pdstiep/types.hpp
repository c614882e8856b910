#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace pdstiep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// One iterate Z = (C, Q, W, V) on the product manifold
/// DP_n x O(n) x W x V.
struct Point {
  Matrix C;  ///< positive doubly stochastic
  Matrix Q;  ///< orthogonal
  Matrix W;  ///< positive on the pair slots, zero elsewhere
  Matrix V;  ///< strictly upper triangular, zero on the pair slots

  Index n() const { return C.rows(); }
};

/// Element of the tangent space T_Z at some base point.
struct TangentVector {
  Matrix dC;
  Matrix dQ;
  Matrix dW;
  Matrix dV;

  static TangentVector zero(Index n) {
    return {Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n),
            Matrix::Zero(n, n)};
  }

  TangentVector& operator+=(const TangentVector& o) {
    dC += o.dC;
    dQ += o.dQ;
    dW += o.dW;
    dV += o.dV;
    return *this;
  }

  TangentVector& operator*=(double a) {
    dC *= a;
    dQ *= a;
    dW *= a;
    dV *= a;
    return *this;
  }

  friend TangentVector operator*(double a, TangentVector v) { return v *= a; }
  friend TangentVector operator+(TangentVector a, const TangentVector& b) { return a += b; }
  friend TangentVector operator-(TangentVector a, const TangentVector& b) {
    a.dC -= b.dC;
    a.dQ -= b.dQ;
    a.dW -= b.dW;
    a.dV -= b.dV;
    return a;
  }

  /// Euclidean (ambient) norm; the Riemannian norm lives in manifolds.hpp.
  double ambient_norm() const {
    return std::sqrt(dC.squaredNorm() + dQ.squaredNorm() + dW.squaredNorm() +
                     dV.squaredNorm());
  }
};

}  // namespace pdstiep
