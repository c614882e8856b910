#pragma once

#include <string>
#include <vector>

#include "pdstiep/spectrum.hpp"
#include "pdstiep/types.hpp"

namespace pdstiep {

enum class Factor { C, Q, W, V };

/// Fisher-orthogonal projection onto the tangent space of the doubly
/// stochastic manifold at A:
///   Pi_A(B) = B - (alpha e^T + e beta^T) .* A,
/// where (alpha, beta) solves [[I, A], [A^T, I]] (alpha; beta) = (Be; B^T e).
/// The system is singular along (e; -e). Eliminating alpha leaves
/// (I - A^T A) beta = B^T e - A^T B e, solved with a pseudo-inverse
/// (eigenvalue cutoff 1e-12 * largest) that is factored once per base point.
class DoublyStochasticProjector {
 public:
  explicit DoublyStochasticProjector(const Matrix& A);

  Matrix apply(const Matrix& B) const;

 private:
  Matrix A_;
  Matrix reduced_pinv_;
};

/// Orthogonal projection of an ambient matrix onto the tangent space of one
/// factor at `base`. The Q case returns Q skew(Q^T B).
Matrix project_tangent(Factor factor, const StructureData& sd, const Point& base,
                       const Matrix& ambient);

/// Factor retractions:
///   C: Sinkhorn(C .* exp(xi ./ C)), tolerance 1e-12
///   Q: qf(Q + xi)
///   W: W_ij exp(xi_ij / W_ij) on the pair slots
///   V: V + xi
/// Throws NotConverged / NonPositiveInput (C) or SingularInputError (Q).
Matrix retract(Factor factor, const StructureData& sd, const Point& base,
               const Matrix& tangent);

/// Factor metrics: Fisher for C and W, Frobenius for Q and V.
double inner(Factor factor, const StructureData& sd, const Point& base, const Matrix& xi,
             const Matrix& eta);

Point product_retract(const StructureData& sd, const Point& base, const TangentVector& dz);

double product_inner(const StructureData& sd, const Point& base, const TangentVector& a,
                     const TangentVector& b);

double product_norm(const StructureData& sd, const Point& base, const TangentVector& a);

/// Projects every component of an ambient 4-tuple onto T_Z.
TangentVector project_tangent(const StructureData& sd, const Point& base,
                              const TangentVector& ambient);

/// Violated tangent-space invariants at `base` (empty when tangent).
std::vector<std::string> tangent_violations(const StructureData& sd, const Point& base,
                                            const TangentVector& v, double tol = 1e-10);

}  // namespace pdstiep
