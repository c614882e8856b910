#include "pdstiep/operator.hpp"

#include <cmath>

#include "pdstiep/errors.hpp"

namespace pdstiep {

Matrix apply_A(const StructureData& sd, const Matrix& W) {
  Matrix out = Matrix::Zero(sd.n, sd.n);
  for (Index k = 0; k < sd.s; ++k) {
    const auto [r, c] = sd.pair_slots[static_cast<std::size_t>(k)];
    const double w = W(r, c);
    if (!(w > 1e-300)) throw ZeroDenominator("apply_A: W entry on a pair slot is not positive");
    out(c, r) = -sd.b(k) * sd.b(k) / w;
  }
  return out;
}

namespace {

Matrix assemble_X(const StructureData& sd, const Point& z) {
  return sd.lambda + apply_A(sd, z.W) + z.W + z.V;
}

}  // namespace

Matrix residual_F(const StructureData& sd, const Point& z) {
  return z.C - z.Q * assemble_X(sd, z) * z.Q.transpose();
}

ResidualContext::ResidualContext(const StructureData& sd, Point z)
    : sd_(sd), z_(std::move(z)), projector_(z_.C) {
  const Index n = sd_.n;
  X_ = assemble_X(sd_, z_);
  X_upper_ = X_.triangularView<Eigen::Upper>();
  for (Index i = 1; i < n; ++i)
    if (X_(i, i - 1) != 0.0) X_subdiag_.emplace_back(i, X_(i, i - 1));
  P_ = z_.Q * X_ * z_.Q.transpose();
  F_ = z_.C - P_;
  residual_norm_ = F_.norm();
  Bw_ = Matrix::Zero(n, n);
  for (Index k = 0; k < sd_.s; ++k) {
    const auto [r, c] = sd_.pair_slots[static_cast<std::size_t>(k)];
    Bw_(r, c) = sd_.b(k) * sd_.b(k) / (z_.W(r, c) * z_.W(r, c));
  }
}

Matrix ResidualContext::upper_times(const Matrix& M) const {
  Matrix out = X_upper_.triangularView<Eigen::Upper>() * M;
  for (const auto& [i, v] : X_subdiag_) out.row(i) += v * M.row(i - 1);
  return out;
}

Matrix ResidualContext::times_upper(const Matrix& M) const {
  Matrix out = M * X_upper_.triangularView<Eigen::Upper>();
  for (const auto& [i, v] : X_subdiag_) out.col(i - 1) += v * M.col(i);
  return out;
}

Matrix ResidualContext::differential(const TangentVector& dz) const {
  const Matrix& Q = z_.Q;
  const Matrix omega = dz.dQ * Q.transpose();
  Matrix out = dz.dC + P_ * omega - omega * P_;
  const Matrix inner = Bw_.cwiseProduct(dz.dW).transpose() + dz.dW + dz.dV;
  out.noalias() -= Q * inner * Q.transpose();
  return out;
}

TangentVector ResidualContext::adjoint(const Matrix& dY) const {
  const Matrix& Q = z_.Q;
  TangentVector out;
  out.dC = projector_.apply(z_.C.cwiseProduct(dY));
  const Matrix dYt = dY.transpose();
  out.dQ = 0.5 * (P_ * dYt - dYt * P_ + P_.transpose() * dY - dY * P_.transpose()) * Q;
  const Matrix H = Q.transpose() * dY * Q;
  out.dW = -z_.W.cwiseProduct(H + Bw_.cwiseProduct(H.transpose()));
  out.dV = -sd_.S.cwiseProduct(H);
  return out;
}

Matrix ResidualContext::normal_apply(double sigma, const Matrix& dY) const {
  // In the frame of Q: with H = Q^T dY Q the adjoint is
  //   dQ = Q K, K = skew([X, H^T]),  dW = -W.*(H + B_W.*H^T),  dV = -S.*H
  // and DF maps it back to dC + Q([X, K] - (B_W.*dW)^T - dW - dV) Q^T.
  const Matrix& Q = z_.Q;
  const Matrix H = Q.transpose() * dY * Q;
  const Matrix Ht = H.transpose();
  const Matrix G = upper_times(Ht) - times_upper(Ht);
  const Matrix K = 0.5 * (G - G.transpose());
  const Matrix dW = -z_.W.cwiseProduct(H + Bw_.cwiseProduct(Ht));
  Matrix inner = upper_times(K) - times_upper(K);
  inner -= Bw_.cwiseProduct(dW).transpose();
  inner -= dW;
  inner += sd_.S.cwiseProduct(H);

  Matrix out = projector_.apply(z_.C.cwiseProduct(dY));
  out.noalias() += Q * inner * Q.transpose();
  if (sigma != 0.0) out += sigma * dY;
  return out;
}

Matrix differential_DF(const StructureData& sd, const Point& z, const TangentVector& dz) {
  return ResidualContext(sd, z).differential(dz);
}

TangentVector adjoint_DF(const StructureData& sd, const Point& z, const Matrix& dY) {
  return ResidualContext(sd, z).adjoint(dY);
}

TangentVector gradient(const StructureData& sd, const Point& z) {
  return ResidualContext(sd, z).gradient();
}

double merit(const StructureData& sd, const Point& z) {
  return 0.5 * residual_F(sd, z).squaredNorm();
}

Matrix normal_apply(const StructureData& sd, const Point& z, double sigma, const Matrix& dY) {
  return ResidualContext(sd, z).normal_apply(sigma, dY);
}

}  // namespace pdstiep
