#pragma once

#include <complex>
#include <vector>

#include "pdstiep/dense_linalg.hpp"
#include "pdstiep/spectrum.hpp"
#include "pdstiep/types.hpp"

namespace pdstiep {

struct BlockPartition {
  std::vector<Index> sizes;
  std::vector<std::vector<std::complex<double>>> clusters;  ///< eigenvalues per block

  std::vector<Index> offsets() const;
};

/// Groups consecutive Schur blocks into clusters of eigenvalues lying within
/// cluster_tol (modulus distance, transitively) of each other. Throws
/// InterleavedClusterError when a cluster is not contiguous along T.
BlockPartition partition_blocks(const SchurForm& form, double cluster_tol = 1e-6);

struct SubspaceResult {
  Matrix theta;               ///< [Theta_1, ..., Theta_q]
  std::vector<Matrix> blocks;  ///< diagonal blocks T_ii
  BlockPartition partition;
  Matrix block_diagonal;       ///< Y^{-1} T Y after elimination

  Matrix theta_block(std::size_t i) const;
};

/// Block-diagonalizes T through Sylvester solves T_ii Z - Z T_jj = -T_ij and
/// accumulates Theta = Q Y, so that C Theta_i = Theta_i T_ii. Every block of
/// Theta is sign-normalized so the largest-magnitude entry of its first
/// column is positive.
SubspaceResult invariant_subspaces(const Matrix& C, const SchurForm& form,
                                   const BlockPartition& partition);

/// |C Theta_i - Theta_i T_ii|_F for every block.
std::vector<double> block_residuals(const Matrix& C, const SubspaceResult& r);

/// Turns an approximate Schur form of C (for instance the solver's, which is
/// exact only up to |F|) into one exact to roundoff, keeping the block
/// boundaries of `partition`. Each split is made invariant by orthogonal
/// Newton corrections built from Sylvester solves, then every diagonal block
/// is re-triangularized. Throws NotConverged when a coupling block does not
/// vanish within max_sweeps.
SchurForm refine_schur(const Matrix& C, const SchurForm& approx, const BlockPartition& partition,
                       int max_sweeps = 8);

/// The Schur form delivered by the solver: Q and T = Lambda + A(W) + W + V.
SchurForm schur_from_point(const StructureData& sd, const Point& z);

}  // namespace pdstiep
