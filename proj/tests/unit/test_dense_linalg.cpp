#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pdstiep/dense_linalg.hpp"
#include "pdstiep/errors.hpp"
#include "pdstiep/random.hpp"

using namespace pdstiep;

namespace {

// quasi-triangular structure and standardized 2x2 blocks
void check_schur_shape(const SchurForm& f) {
  const Index n = f.T.rows();
  Index i = 0;
  for (int size : f.block_sizes) {
    REQUIRE((size == 1 || size == 2));
    if (size == 2) {
      CHECK(f.T(i, i) == f.T(i + 1, i + 1));
      CHECK(f.T(i, i + 1) * f.T(i + 1, i) < 0.0);
    } else if (i + 1 < n) {
      CHECK(f.T(i + 1, i) == 0.0);
    }
    i += size;
  }
  CHECK(i == n);
  for (Index c = 0; c < n; ++c)
    for (Index r = c + 2; r < n; ++r) CHECK(f.T(r, c) == 0.0);
}

double reconstruction(const Matrix& A, const SchurForm& f) {
  return (f.Q * f.T * f.Q.transpose() - A).norm() / std::max(A.norm(), 1e-300);
}

double orthogonality(const Matrix& Q) {
  return (Q.transpose() * Q - Matrix::Identity(Q.rows(), Q.cols())).norm();
}

}  // namespace

TEST_CASE("real_schur of the identity") {
  const SchurForm f = real_schur(Matrix::Identity(4, 4));
  CHECK(f.Q.isApprox(Matrix::Identity(4, 4)));
  CHECK(f.T.isApprox(Matrix::Identity(4, 4)));
  CHECK(f.block_sizes == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("real_schur of a rotation") {
  Matrix A(2, 2);
  A << 0, 1, -1, 0;
  const SchurForm f = real_schur(A);
  REQUIRE(f.block_sizes == std::vector<int>{2});
  CHECK(std::abs(f.T(0, 0)) < 1e-15);
  CHECK(f.T(0, 1) * f.T(1, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  check_schur_shape(f);
}

TEST_CASE("real_schur small and degenerate inputs") {
  const SchurForm empty = real_schur(Matrix(0, 0));
  CHECK(empty.block_sizes.empty());
  Matrix one(1, 1);
  one << 3.5;
  CHECK(real_schur(one).T(0, 0) == 3.5);
  const SchurForm zero = real_schur(Matrix::Zero(5, 5));
  CHECK(zero.T.norm() == 0.0);
  Matrix jordan = Matrix::Zero(4, 4);
  jordan(0, 1) = jordan(1, 2) = jordan(2, 3) = 1.0;
  const SchurForm j = real_schur(jordan);
  CHECK(reconstruction(jordan, j) < 1e-14);
  check_schur_shape(j);
  // 2x2 with real eigenvalues gets split
  Matrix real2(2, 2);
  real2 << 1, 2, 3, 4;
  const SchurForm r = real_schur(real2);
  CHECK(r.block_sizes == std::vector<int>{1, 1});
  CHECK(reconstruction(real2, r) < 1e-14);
}

TEST_CASE("real_schur error paths") {
  CHECK_THROWS_AS(real_schur(Matrix::Ones(2, 3)), NonSquareInput);
  Matrix bad = Matrix::Ones(3, 3);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(real_schur(bad), InputError);
}

TEST_CASE("real_schur on random matrices: reconstruction, orthogonality, blocks") {
  Rng rng(42);
  double worst_rec = 0.0, worst_orth = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + trial % 19;
    const Matrix A = trial % 3 == 0 ? rng.uniform_matrix(n, n) : rng.normal_matrix(n, n);
    const SchurForm f = real_schur(A);
    worst_rec = std::max(worst_rec, reconstruction(A, f) / static_cast<double>(n));
    worst_orth = std::max(worst_orth, orthogonality(f.Q) / static_cast<double>(n));
    check_schur_shape(f);
  }
  CHECK(worst_rec <= 1e-12);
  CHECK(worst_orth <= 1e-12);
}

TEST_CASE("real_schur eigenvalues agree with the characteristic polynomial") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 4;
    const Matrix A = rng.normal_matrix(n, n);
    const SchurForm f = real_schur(A);
    const auto got = quasi_eigenvalues(f.T, f.block_sizes);
    CHECK(oracle::multiset_distance(got, oracle::eigenvalues(A)) <= 1e-8);
  }
}

TEST_CASE("real_schur on structured matrices") {
  Rng rng(3);
  // companion-like and graded matrices stress deflation
  for (Index n : {5, 8, 12}) {
    Matrix A = Matrix::Zero(n, n);
    for (Index i = 1; i < n; ++i) A(i, i - 1) = 1.0;
    A.col(n - 1) = rng.normal_matrix(n, 1);
    const SchurForm f = real_schur(A);
    CHECK(reconstruction(A, f) < 1e-12 * n);
    check_schur_shape(f);

    Matrix G = rng.normal_matrix(n, n);
    for (Index i = 0; i < n; ++i) G.row(i) *= std::pow(10.0, -static_cast<double>(i));
    const SchurForm g = real_schur(G);
    CHECK(reconstruction(G, g) < 1e-12 * n);
  }
}

TEST_CASE("standardize_2x2") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = rng.normal(), b = rng.normal(), c = rng.normal(), d = rng.normal();
    const Standardized2x2 s = standardize_2x2(a, b, c, d);
    Matrix in(2, 2), out(2, 2), G(2, 2);
    in << a, b, c, d;
    out << s.a, s.b, s.c, s.d;
    G << s.cs, -s.sn, s.sn, s.cs;
    CHECK((G * out * G.transpose() - in).norm() <= 1e-14 * (1 + in.norm()));
    CHECK(s.cs * s.cs + s.sn * s.sn == doctest::Approx(1.0).epsilon(1e-15));
    const double disc = (a - d) * (a - d) + 4 * b * c;
    if (disc < -1e-12) {
      CHECK(s.a == s.d);
      CHECK(s.b * s.c < 0.0);
    } else if (disc > 1e-12) {
      CHECK(s.c == 0.0);
    }
  }
}

TEST_CASE("standardize_blocks repairs unstandardized blocks") {
  Rng rng(6);
  const Matrix A = rng.normal_matrix(8, 8);
  SchurForm f = real_schur(A);
  Index i = 0;
  for (int size : f.block_sizes) {
    if (size == 2) {
      // perturb the block by a rotation so it is no longer standard
      const double t = 0.3, cs = std::cos(t), sn = std::sin(t);
      Matrix G = Matrix::Identity(8, 8);
      G(i, i) = cs;
      G(i, i + 1) = -sn;
      G(i + 1, i) = sn;
      G(i + 1, i + 1) = cs;
      f.T = G.transpose() * f.T * G;
      f.Q = f.Q * G;
    }
    i += size;
  }
  const SchurForm g = standardize_blocks(f);
  check_schur_shape(g);
  CHECK(reconstruction(A, g) < 1e-13);

  SchurForm real_block;
  real_block.Q = Matrix::Identity(2, 2);
  real_block.T = (Matrix(2, 2) << 1, 1, 1, 1).finished();
  real_block.block_sizes = {2};
  CHECK_THROWS_AS(standardize_blocks(real_block), DegenerateBlockError);
}

TEST_CASE("detect_blocks") {
  Matrix T = Matrix::Zero(5, 5);
  T(2, 1) = 0.5;
  CHECK(detect_blocks(T) == std::vector<int>{1, 2, 1, 1});
}

TEST_CASE("qf against Gram-Schmidt") {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + trial % 10;
    const Matrix A = rng.normal_matrix(n, n);
    const Matrix Q = qf(A);
    CHECK((Q - oracle::gram_schmidt_q(A)).norm() <= 1e-10);
    const QrFactors qr = qr_positive(A);
    CHECK((qr.Q * qr.R - A).norm() <= 1e-13 * A.norm() * n);
    CHECK(orthogonality(qr.Q) <= 1e-13 * n);
    for (Index i = 0; i < n; ++i) CHECK(qr.R(i, i) > 0.0);
    CHECK((Matrix(qr.R.triangularView<Eigen::StrictlyLower>())).norm() == 0.0);
  }
  CHECK(qf(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
}

TEST_CASE("qf error paths") {
  Matrix sing = Matrix::Ones(3, 3);
  CHECK_THROWS_AS(qf(sing), SingularInputError);
  CHECK_THROWS_AS(qf(Matrix::Ones(3, 2)), NonSquareInput);
}

TEST_CASE("sylvester_solve against the Kronecker oracle") {
  Rng rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const Index p = 1 + trial % 6, q = 1 + (trial / 6) % 5;
    const SchurForm fa = real_schur(rng.normal_matrix(p, p));
    Matrix Bm = rng.normal_matrix(q, q);
    Bm.diagonal().array() += 6.0;  // keep the spectra apart
    const SchurForm fb = real_schur(Bm);
    const Matrix C = rng.normal_matrix(p, q);
    const Matrix Z = sylvester_solve(fa.T, fb.T, C);
    CHECK((fa.T * Z - Z * fb.T + C).norm() <= 1e-11 * (1 + C.norm()));
    CHECK((Z - oracle::sylvester_kron(fa.T, fb.T, C)).norm() <= 1e-9 * (1 + Z.norm()));
  }
}

TEST_CASE("sylvester_solve error paths") {
  const Matrix A = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(sylvester_solve(A, A, Matrix::Ones(2, 2)), SpectraOverlapError);
  CHECK_THROWS_AS(sylvester_solve(A, A, Matrix::Ones(3, 2)), InputError);
  CHECK(sylvester_solve(A, 2 * A, Matrix::Zero(2, 2)).norm() == 0.0);
}

TEST_CASE("quasi_eigenvalues") {
  Matrix T(3, 3);
  T << 2, 1, 5, -4, 2, 1, 0, 0, 7;
  const std::vector<int> sizes{2, 1};
  const auto ev = quasi_eigenvalues(T, sizes);
  REQUIRE(ev.size() == 3);
  CHECK(ev[0].real() == doctest::Approx(2.0));
  CHECK(std::abs(ev[0].imag()) == doctest::Approx(2.0));
  CHECK(ev[0] == std::conj(ev[1]));
  CHECK(ev[2] == std::complex<double>(7, 0));
}
