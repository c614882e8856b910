#include "pdstiep/dense_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdstiep/errors.hpp"

namespace pdstiep {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sign_of(double magnitude, double s) { return std::copysign(std::abs(magnitude), s); }

// Rows (i, i+1), columns [c0, n): row_i <- cs row_i + sn row_{i+1}, etc.
void rotate_rows(Matrix& T, Index i, Index c0, double cs, double sn) {
  for (Index j = c0; j < T.cols(); ++j) {
    const double x = T(i, j);
    const double y = T(i + 1, j);
    T(i, j) = cs * x + sn * y;
    T(i + 1, j) = cs * y - sn * x;
  }
}

// Columns (i, i+1), rows [0, r1).
void rotate_cols(Matrix& T, Index i, Index r1, double cs, double sn) {
  for (Index r = 0; r < r1; ++r) {
    const double x = T(r, i);
    const double y = T(r, i + 1);
    T(r, i) = cs * x + sn * y;
    T(r, i + 1) = cs * y - sn * x;
  }
}

// Applies the standardizing rotation of the 2x2 block at (i, i) to the rest
// of T and to Q, and writes the standardized block.
void apply_block_rotation(Matrix& T, Matrix& Q, Index i, const Standardized2x2& s) {
  rotate_rows(T, i, i + 2, s.cs, s.sn);
  rotate_cols(T, i, i, s.cs, s.sn);
  rotate_cols(Q, i, Q.rows(), s.cs, s.sn);
  T(i, i) = s.a;
  T(i, i + 1) = s.b;
  T(i + 1, i) = s.c;
  T(i + 1, i + 1) = s.d;
}

void hessenberg_reduce(Matrix& H, Matrix& Q) {
  const Index n = H.rows();
  Q.setIdentity(n, n);
  for (Index k = 0; k + 2 < n; ++k) {
    const Index m = n - k - 1;
    Vector v = H.col(k).segment(k + 1, m);
    const double xnorm = v.norm();
    if (xnorm == 0.0) continue;
    const double alpha = -sign_of(xnorm, v(0));
    v(0) -= alpha;
    const double vv = v.squaredNorm();
    if (vv == 0.0) continue;
    const double beta = 2.0 / vv;

    auto rows = H.block(k + 1, k, m, n - k);
    rows.noalias() -= (beta * v) * (v.transpose() * rows);
    auto cols = H.rightCols(m);
    cols.noalias() -= (cols * v) * (beta * v).transpose();
    auto qcols = Q.rightCols(m);
    qcols.noalias() -= (qcols * v) * (beta * v).transpose();

    H(k + 1, k) = alpha;
    H.col(k).segment(k + 2, m - 1).setZero();
  }
}

// Householder reflector P = I - beta v v^T with P x = (+-|x|, 0, ..., 0).
template <int N>
bool make_reflector(const Eigen::Matrix<double, N, 1>& x, Eigen::Matrix<double, N, 1>& v,
                    double& beta) {
  const double xnorm = x.norm();
  if (xnorm == 0.0) return false;
  v = x;
  v(0) += sign_of(xnorm, x(0));
  beta = 2.0 / v.squaredNorm();
  return true;
}

// One implicit double-shift step on the active window [il, iu].
void francis_step(Matrix& H, Matrix& Q, Index il, Index iu, int iter) {
  const Index n = H.rows();
  double h11, h12, h21, h22;
  if (iter == 10 || iter == 20) {
    // exceptional shift
    const double s = std::abs(H(iu, iu - 1)) + std::abs(H(iu - 1, iu - 2));
    h11 = 0.75 * s + H(iu, iu);
    h12 = -0.4375 * s;
    h21 = s;
    h22 = h11;
  } else {
    h11 = H(iu - 1, iu - 1);
    h12 = H(iu - 1, iu);
    h21 = H(iu, iu - 1);
    h22 = H(iu, iu);
  }
  const double tr = h11 + h22;
  const double det = h11 * h22 - h12 * h21;

  Eigen::Vector3d x;
  x(0) = H(il, il) * H(il, il) + H(il, il + 1) * H(il + 1, il) - tr * H(il, il) + det;
  x(1) = H(il + 1, il) * (H(il, il) + H(il + 1, il + 1) - tr);
  x(2) = H(il + 1, il) * H(il + 2, il + 1);

  for (Index k = il; k + 2 <= iu; ++k) {
    Eigen::Vector3d v;
    double beta = 0.0;
    if (make_reflector<3>(x, v, beta)) {
      const Index c0 = k > il ? k - 1 : il;
      auto rows = H.block(k, c0, 3, n - c0);
      rows.noalias() -= (beta * v) * (v.transpose() * rows);
      const Index r1 = std::min(k + 4, iu + 1);
      auto cols = H.block(0, k, r1, 3);
      cols.noalias() -= (cols * v) * (beta * v).transpose();
      auto qcols = Q.middleCols(k, 3);
      qcols.noalias() -= (qcols * v) * (beta * v).transpose();
      if (k > il) {
        H(k + 1, k - 1) = 0.0;
        H(k + 2, k - 1) = 0.0;
      }
    }
    x(0) = H(k + 1, k);
    x(1) = H(k + 2, k);
    if (k + 3 <= iu) x(2) = H(k + 3, k);
  }

  // closing 2-vector reflector on rows (iu-1, iu)
  Eigen::Vector2d x2(x(0), x(1));
  Eigen::Vector2d v2;
  double beta = 0.0;
  if (make_reflector<2>(x2, v2, beta)) {
    const Index k = iu - 1;
    auto rows = H.block(k, k - 1, 2, n - k + 1);
    rows.noalias() -= (beta * v2) * (v2.transpose() * rows);
    auto cols = H.block(0, k, iu + 1, 2);
    cols.noalias() -= (cols * v2) * (beta * v2).transpose();
    auto qcols = Q.middleCols(k, 2);
    qcols.noalias() -= (qcols * v2) * (beta * v2).transpose();
    H(iu, iu - 2) = 0.0;
  }
}

// Largest l <= iu with a negligible subdiagonal H(l, l-1) (zeroed), else 0.
Index find_small_subdiag(Matrix& H, Index iu, double tol, double scale) {
  for (Index k = iu; k > 0; --k) {
    double s = std::abs(H(k - 1, k - 1)) + std::abs(H(k, k));
    if (s == 0.0) s = scale;
    const double h = std::abs(H(k, k - 1));
    if (h <= tol * s || h < std::numeric_limits<double>::min()) {
      H(k, k - 1) = 0.0;
      return k;
    }
  }
  return 0;
}

}  // namespace

Standardized2x2 standardize_2x2(double a, double b, double c, double d) {
  // Follows the classic dlanv2 construction.
  double cs = 1.0;
  double sn = 0.0;
  if (c == 0.0) {
    // already upper triangular
  } else if (b == 0.0) {
    cs = 0.0;
    sn = 1.0;
    std::swap(a, d);
    b = -c;
    c = 0.0;
  } else if ((a - d) == 0.0 && std::signbit(b) != std::signbit(c)) {
    // already standard
  } else {
    const double temp = a - d;
    double p = 0.5 * temp;
    const double bcmax = std::max(std::abs(b), std::abs(c));
    const double bcmis = std::min(std::abs(b), std::abs(c)) * sign_of(1.0, b) * sign_of(1.0, c);
    const double scale = std::max(std::abs(p), bcmax);
    double z = (p / scale) * p + (bcmax / scale) * bcmis;
    if (z >= 4.0 * kEps) {
      // real eigenvalues
      z = p + sign_of(std::sqrt(scale) * std::sqrt(z), p);
      a = d + z;
      d = d - (bcmax / z) * bcmis;
      const double tau = std::hypot(c, z);
      cs = z / tau;
      sn = c / tau;
      b = b - c;
      c = 0.0;
    } else {
      // complex or nearly equal real eigenvalues: equalize the diagonal
      const double sigma = b + c;
      const double tau = std::hypot(sigma, temp);
      cs = std::sqrt(0.5 * (1.0 + std::abs(sigma) / tau));
      sn = -(p / (tau * cs)) * sign_of(1.0, sigma);
      const double aa = a * cs + b * sn;
      const double bb = -a * sn + b * cs;
      const double cc = c * cs + d * sn;
      const double dd = -c * sn + d * cs;
      a = aa * cs + cc * sn;
      b = bb * cs + dd * sn;
      c = -aa * sn + cc * cs;
      d = -bb * sn + dd * cs;
      const double mid = 0.5 * (a + d);
      a = mid;
      d = mid;
      if (c != 0.0) {
        if (b != 0.0) {
          if (std::signbit(b) == std::signbit(c)) {
            // real eigenvalues after all: triangularize
            const double sab = std::sqrt(std::abs(b));
            const double sac = std::sqrt(std::abs(c));
            p = sign_of(sab * sac, c);
            const double t = 1.0 / std::sqrt(std::abs(b + c));
            a = mid + p;
            d = mid - p;
            b = b - c;
            c = 0.0;
            const double cs1 = sab * t;
            const double sn1 = sac * t;
            const double tmp = cs * cs1 - sn * sn1;
            sn = cs * sn1 + sn * cs1;
            cs = tmp;
          }
        } else {
          b = -c;
          c = 0.0;
          const double tmp = cs;
          cs = -sn;
          sn = tmp;
        }
      }
    }
  }
  return {a, b, c, d, cs, sn};
}

std::vector<int> detect_blocks(const Matrix& T) {
  std::vector<int> sizes;
  const Index n = T.rows();
  for (Index i = 0; i < n;) {
    if (i + 1 < n && T(i + 1, i) != 0.0) {
      sizes.push_back(2);
      i += 2;
    } else {
      sizes.push_back(1);
      i += 1;
    }
  }
  return sizes;
}

SchurForm real_schur(const Matrix& A, double tol) {
  if (A.rows() != A.cols()) throw NonSquareInput("real_schur: matrix is not square");
  if (!A.allFinite()) throw InputError("real_schur: matrix has non-finite entries");
  const Index n = A.rows();
  SchurForm out;
  out.T = A;
  hessenberg_reduce(out.T, out.Q);
  Matrix& H = out.T;
  Matrix& Q = out.Q;

  const double scale = std::max(H.norm(), std::numeric_limits<double>::min());
  const long max_sweeps = 30L * std::max<Index>(n, 10);
  long sweeps = 0;
  int iter = 0;
  Index iu = n - 1;
  while (iu >= 0) {
    const Index il = find_small_subdiag(H, iu, tol, scale);
    if (il == iu) {
      --iu;
      iter = 0;
    } else if (il == iu - 1) {
      const Index i = iu - 1;
      apply_block_rotation(H, Q, i, standardize_2x2(H(i, i), H(i, i + 1), H(i + 1, i), H(i + 1, i + 1)));
      iu -= 2;
      iter = 0;
    } else {
      if (++sweeps > max_sweeps)
        throw SchurFailure("real_schur: QR iteration did not converge (n = " + std::to_string(n) + ")");
      francis_step(H, Q, il, iu, iter);
      ++iter;
    }
  }

  for (Index j = 0; j < n; ++j)
    for (Index i = j + 2; i < n; ++i) H(i, j) = 0.0;
  out.block_sizes = detect_blocks(H);
  return out;
}

SchurForm standardize_blocks(SchurForm form) {
  Index i = 0;
  for (int size : form.block_sizes) {
    if (size == 2) {
      const Standardized2x2 s = standardize_2x2(form.T(i, i), form.T(i, i + 1), form.T(i + 1, i),
                                                form.T(i + 1, i + 1));
      if (s.c == 0.0)
        throw DegenerateBlockError("standardize_blocks: 2x2 block at " + std::to_string(i) +
                                   " has real eigenvalues");
      apply_block_rotation(form.T, form.Q, i, s);
    }
    i += size;
  }
  return form;
}

QrFactors qr_positive(const Matrix& A) {
  if (A.rows() != A.cols()) throw NonSquareInput("qf: matrix is not square");
  const Index n = A.rows();
  Matrix R = A;
  Matrix Q = Matrix::Identity(n, n);
  for (Index k = 0; k + 1 < n; ++k) {
    const Index m = n - k;
    Vector v = R.col(k).tail(m);
    const double xnorm = v.norm();
    if (xnorm == 0.0) continue;
    const double alpha = -sign_of(xnorm, v(0));
    v(0) -= alpha;
    const double vv = v.squaredNorm();
    if (vv == 0.0) continue;
    const double beta = 2.0 / vv;
    auto rows = R.bottomRightCorner(m, n - k);
    rows.noalias() -= (beta * v) * (v.transpose() * rows);
    auto qcols = Q.rightCols(m);
    qcols.noalias() -= (qcols * v) * (beta * v).transpose();
    R.col(k).tail(m - 1).setZero();
  }
  const double floor = 1e-14 * A.norm();
  for (Index i = 0; i < n; ++i) {
    if (std::abs(R(i, i)) <= floor)
      throw SingularInputError("qf: matrix is numerically singular");
    if (R(i, i) < 0.0) {
      R.row(i) *= -1.0;
      Q.col(i) *= -1.0;
    }
  }
  return {std::move(Q), Matrix(R.triangularView<Eigen::Upper>())};
}

Matrix qf(const Matrix& A) { return qr_positive(A).Q; }

namespace {

struct BlockSpan {
  Index start;
  Index size;
};

std::vector<BlockSpan> spans_of(const Matrix& T) {
  std::vector<BlockSpan> spans;
  Index i = 0;
  for (int size : detect_blocks(T)) {
    spans.push_back({i, size});
    i += size;
  }
  return spans;
}

// Dense solve of the (at most 4x4) Kronecker system with partial pivoting.
Vector small_solve(Matrix K, Vector rhs) {
  const Index m = K.rows();
  for (Index col = 0; col < m; ++col) {
    Index piv = col;
    for (Index r = col + 1; r < m; ++r)
      if (std::abs(K(r, col)) > std::abs(K(piv, col))) piv = r;
    if (std::abs(K(piv, col)) < 1e-13)
      throw SpectraOverlapError("sylvester_solve: spectra of A and B overlap");
    if (piv != col) {
      K.row(piv).swap(K.row(col));
      std::swap(rhs(piv), rhs(col));
    }
    for (Index r = col + 1; r < m; ++r) {
      const double f = K(r, col) / K(col, col);
      K.row(r).tail(m - col) -= f * K.row(col).tail(m - col);
      rhs(r) -= f * rhs(col);
    }
  }
  for (Index r = m - 1; r >= 0; --r) {
    double acc = rhs(r);
    for (Index c = r + 1; c < m; ++c) acc -= K(r, c) * rhs(c);
    rhs(r) = acc / K(r, r);
  }
  return rhs;
}

}  // namespace

Matrix sylvester_solve(const Matrix& A, const Matrix& B, const Matrix& C) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || C.rows() != A.rows() ||
      C.cols() != B.rows())
    throw InputError("sylvester_solve: dimension mismatch");
  const Index p = A.rows();
  const Index q = B.rows();
  Matrix Z = Matrix::Zero(p, q);
  const auto a_spans = spans_of(A);
  const auto b_spans = spans_of(B);

  for (const BlockSpan& bj : b_spans) {
    for (auto it = a_spans.rbegin(); it != a_spans.rend(); ++it) {
      const BlockSpan& ai = *it;
      const Index r0 = ai.start, pr = ai.size;
      const Index c0 = bj.start, qc = bj.size;
      Matrix rhs = -C.block(r0, c0, pr, qc);
      const Index below = p - (r0 + pr);
      if (below > 0)
        rhs.noalias() -= A.block(r0, r0 + pr, pr, below) * Z.block(r0 + pr, c0, below, qc);
      if (c0 > 0) rhs.noalias() += Z.block(r0, 0, pr, c0) * B.block(0, c0, c0, qc);

      // (I_qc kron A_ii - B_jj^T kron I_pr) vec(Z_ij) = vec(rhs)
      const Index m = pr * qc;
      Matrix K = Matrix::Zero(m, m);
      const Matrix Aii = A.block(r0, r0, pr, pr);
      const Matrix Bjj = B.block(c0, c0, qc, qc);
      for (Index cb = 0; cb < qc; ++cb)
        K.block(cb * pr, cb * pr, pr, pr) += Aii;
      for (Index cb = 0; cb < qc; ++cb)
        for (Index ca = 0; ca < qc; ++ca)
          K.block(cb * pr, ca * pr, pr, pr).diagonal().array() -= Bjj(ca, cb);
      const Vector sol = small_solve(K, Eigen::Map<const Vector>(rhs.data(), m));
      Z.block(r0, c0, pr, qc) = Eigen::Map<const Matrix>(sol.data(), pr, qc);
    }
  }
  return Z;
}

std::vector<std::complex<double>> quasi_eigenvalues(const Matrix& T,
                                                    std::span<const int> block_sizes) {
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<std::size_t>(T.rows()));
  Index i = 0;
  for (int size : block_sizes) {
    if (size == 1) {
      out.emplace_back(T(i, i), 0.0);
    } else {
      const double mean = 0.5 * (T(i, i) + T(i + 1, i + 1));
      const double half = 0.5 * (T(i, i) - T(i + 1, i + 1));
      const double disc = half * half + T(i, i + 1) * T(i + 1, i);
      if (disc < 0.0) {
        const double im = std::sqrt(-disc);
        out.emplace_back(mean, im);
        out.emplace_back(mean, -im);
      } else {
        const double re = std::sqrt(disc);
        out.emplace_back(mean + re, 0.0);
        out.emplace_back(mean - re, 0.0);
      }
    }
    i += size;
  }
  return out;
}

}  // namespace pdstiep
