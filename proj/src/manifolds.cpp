#include "pdstiep/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdstiep/balance.hpp"
#include "pdstiep/dense_linalg.hpp"
#include "pdstiep/errors.hpp"

namespace pdstiep {

DoublyStochasticProjector::DoublyStochasticProjector(const Matrix& A) : A_(A) {
  const Index n = A.rows();
  Matrix reduced = Matrix::Identity(n, n);
  reduced.noalias() -= A.transpose() * A;
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(reduced);
  const Vector& w = eig.eigenvalues();
  const double cutoff = 1e-12 * std::max(w.cwiseAbs().maxCoeff(), 0.0);
  Vector inv = Vector::Zero(n);
  for (Index i = 0; i < n; ++i)
    if (std::abs(w(i)) > cutoff) inv(i) = 1.0 / w(i);
  reduced_pinv_ = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

Matrix DoublyStochasticProjector::apply(const Matrix& B) const {
  const Vector row_sums = B.rowwise().sum();
  const Vector col_sums = B.colwise().sum().transpose();
  const Vector beta = reduced_pinv_ * (col_sums - A_.transpose() * row_sums);
  const Vector alpha = row_sums - A_ * beta;
  Matrix out = B;
  out.array() -= (alpha.replicate(1, B.cols()) + beta.transpose().replicate(B.rows(), 1))
                     .array() *
                 A_.array();
  return out;
}

Matrix project_tangent(Factor factor, const StructureData& sd, const Point& base,
                       const Matrix& ambient) {
  switch (factor) {
    case Factor::C:
      return DoublyStochasticProjector(base.C).apply(ambient);
    case Factor::Q: {
      const Matrix K = base.Q.transpose() * ambient;
      return base.Q * (0.5 * (K - K.transpose()));
    }
    case Factor::W:
      return sd.M.cwiseProduct(ambient);
    case Factor::V:
      return sd.S.cwiseProduct(ambient);
  }
  return ambient;
}

Matrix retract(Factor factor, const StructureData& sd, const Point& base, const Matrix& tangent) {
  switch (factor) {
    case Factor::C: {
      // log-space with each row shifted to max 0; balancing ignores row scaling
      Eigen::ArrayXXd logs = base.C.array().log() + tangent.array() / base.C.array();
      logs.colwise() -= logs.rowwise().maxCoeff();
      const Matrix moved =
          logs.exp().max(std::numeric_limits<double>::min()).matrix();
      return sinkhorn(moved, 1e-12, 10000).balanced;
    }
    case Factor::Q:
      return qf(base.Q + tangent);
    case Factor::W: {
      Matrix out = Matrix::Zero(base.W.rows(), base.W.cols());
      for (const auto& [r, c] : sd.pair_slots)
        out(r, c) = base.W(r, c) * std::exp(tangent(r, c) / base.W(r, c));
      return out;
    }
    case Factor::V:
      return base.V + tangent;
  }
  return tangent;
}

double inner(Factor factor, const StructureData& sd, const Point& base, const Matrix& xi,
             const Matrix& eta) {
  switch (factor) {
    case Factor::C:
      return (xi.array() * eta.array() / base.C.array()).sum();
    case Factor::W: {
      double acc = 0.0;
      for (const auto& [r, c] : sd.pair_slots) acc += xi(r, c) * eta(r, c) / base.W(r, c);
      return acc;
    }
    case Factor::Q:
    case Factor::V:
      return (xi.array() * eta.array()).sum();
  }
  return 0.0;
}

Point product_retract(const StructureData& sd, const Point& base, const TangentVector& dz) {
  return {retract(Factor::C, sd, base, dz.dC), retract(Factor::Q, sd, base, dz.dQ),
          retract(Factor::W, sd, base, dz.dW), retract(Factor::V, sd, base, dz.dV)};
}

double product_inner(const StructureData& sd, const Point& base, const TangentVector& a,
                     const TangentVector& b) {
  return inner(Factor::C, sd, base, a.dC, b.dC) + inner(Factor::Q, sd, base, a.dQ, b.dQ) +
         inner(Factor::W, sd, base, a.dW, b.dW) + inner(Factor::V, sd, base, a.dV, b.dV);
}

double product_norm(const StructureData& sd, const Point& base, const TangentVector& a) {
  return std::sqrt(std::max(product_inner(sd, base, a, a), 0.0));
}

TangentVector project_tangent(const StructureData& sd, const Point& base,
                              const TangentVector& ambient) {
  return {project_tangent(Factor::C, sd, base, ambient.dC),
          project_tangent(Factor::Q, sd, base, ambient.dQ),
          project_tangent(Factor::W, sd, base, ambient.dW),
          project_tangent(Factor::V, sd, base, ambient.dV)};
}

std::vector<std::string> tangent_violations(const StructureData& sd, const Point& base,
                                            const TangentVector& v, double tol) {
  std::vector<std::string> out;
  const double c_scale = std::max(v.dC.norm(), 1e-300);
  if (v.dC.rowwise().sum().norm() > tol * c_scale ||
      v.dC.colwise().sum().norm() > tol * c_scale)
    out.push_back("dC row/column sums are not zero");
  const Matrix K = base.Q.transpose() * v.dQ;
  if ((K + K.transpose()).norm() > tol * std::max(v.dQ.norm(), 1e-300))
    out.push_back("Q^T dQ is not skew-symmetric");
  if ((v.dW - sd.M.cwiseProduct(v.dW)).cwiseAbs().maxCoeff() > 0.0)
    out.push_back("dW has support off the pair slots");
  if ((v.dV - sd.S.cwiseProduct(v.dV)).cwiseAbs().maxCoeff() > 0.0)
    out.push_back("dV has support outside the V pattern");
  return out;
}

}  // namespace pdstiep
