#pragma once

#include <complex>
#include <span>
#include <vector>

#include "pdstiep/types.hpp"

namespace pdstiep {

/// A = Q T Q^T with T upper quasi-triangular.
struct SchurForm {
  Matrix Q;
  Matrix T;
  std::vector<int> block_sizes;  ///< 1s and 2s along the diagonal of T
};

/// Real Schur decomposition: Householder Hessenberg reduction followed by
/// Francis double-shift QR. A subdiagonal entry is deflated when
/// |t(i+1,i)| <= tol * (|t(i,i)| + |t(i+1,i+1)|). Converged 2x2 blocks with
/// real eigenvalues are split; complex ones are returned standardized
/// ([[a, b], [c, a]], bc < 0). Throws SchurFailure after 30*max(n, 10) sweeps.
SchurForm real_schur(const Matrix& A, double tol = 1e-14);

/// Brings every 2x2 block of T into the form [[a, b], [c, a]] with bc < 0 by
/// Givens similarities applied to T and to the columns of Q.
/// Throws DegenerateBlockError when a 2x2 block has real eigenvalues.
SchurForm standardize_blocks(SchurForm form);

/// Rotation produced by standardizing one 2x2 block:
/// [[a, b], [c, d]]_in = G [[a, b], [c, d]]_out G^T, G = [[cs, -sn], [sn, cs]].
struct Standardized2x2 {
  double a, b, c, d;
  double cs, sn;
};

/// Standardized Schur factorization of a real 2x2 matrix. When the
/// eigenvalues are real the output is upper triangular (c == 0); otherwise
/// a == d and bc < 0.
Standardized2x2 standardize_2x2(double a, double b, double c, double d);

/// Block sizes read off the nonzero subdiagonal of a quasi-triangular T.
std::vector<int> detect_blocks(const Matrix& T);

/// Q factor of A = QR with R_ii > 0 (Householder).
/// Throws SingularInputError when min |R_ii| <= 1e-14 * |A|_F.
Matrix qf(const Matrix& A);

struct QrFactors {
  Matrix Q;
  Matrix R;
};

/// Full QR with positive diagonal R; same singularity rule as qf.
QrFactors qr_positive(const Matrix& A);

/// Bartels-Stewart: solves A Z - Z B = -C for quasi-triangular A (p x p) and
/// B (q x q). Throws SpectraOverlapError when a pivot of a diagonal-block
/// solve falls below 1e-13 in magnitude.
Matrix sylvester_solve(const Matrix& A, const Matrix& B, const Matrix& C);

/// Eigenvalues of a quasi-triangular matrix block by block; each 2x2 block
/// contributes the pair mean +/- sqrt(disc), complex when disc < 0.
std::vector<std::complex<double>> quasi_eigenvalues(const Matrix& T,
                                                    std::span<const int> block_sizes);

}  // namespace pdstiep
