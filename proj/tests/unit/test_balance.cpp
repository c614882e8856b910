#include <cmath>

#include "doctest.h"
#include "pdstiep/balance.hpp"
#include "pdstiep/errors.hpp"
#include "pdstiep/random.hpp"

using namespace pdstiep;

namespace {

Matrix google6() {
  Matrix C(6, 6);
  const double a = 1.0 / 40, s = 1.0 / 6, h = 19.0 / 80, g = 9.0 / 20;
  C << a, 7.0 / 8, a, a, a, a,
       a, a, h, h, h, h,
       s, s, s, s, s, s,
       a, a, a, g, a, g,
       a, a, a, g, a, g,
       s, s, s, s, s, s;
  return C;
}

}  // namespace

TEST_CASE("already doubly stochastic input") {
  for (Index n : {1, 2, 5, 10}) {
    const Matrix J = Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
    const BalanceResult r = sinkhorn(J);
    CHECK(r.iterations <= 1);
    CHECK((r.balanced - J).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("rank-one input balances to the uniform matrix") {
  Rng rng(5);
  const Index n = 7;
  const Vector u = rng.uniform_matrix(n, 1), v = rng.uniform_matrix(n, 1);
  const BalanceResult r = sinkhorn(u * v.transpose());
  CHECK((r.balanced - Matrix::Constant(n, n, 1.0 / n)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Google matrix of the six-node digraph") {
  Matrix expected(6, 6);
  expected << 0.0849, 0.7646, 0.0578, 0.0175, 0.0578, 0.0175,
              0.0553, 0.0142, 0.3573, 0.1080, 0.3573, 0.1080,
              0.3301, 0.0849, 0.2246, 0.0679, 0.2246, 0.0679,
              0.0998, 0.0257, 0.0679, 0.3694, 0.0679, 0.3694,
              0.0998, 0.0257, 0.0679, 0.3694, 0.0679, 0.3694,
              0.3301, 0.0849, 0.2246, 0.0679, 0.2246, 0.0679;
  const BalanceResult r = sinkhorn(google6());
  CHECK((r.balanced - expected).cwiseAbs().maxCoeff() <= 5e-4);
  CHECK(r.residual <= 1e-12);
}

TEST_CASE("output is D1 A D2 and row/column sums hit the tolerance") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial % 12;
    const Matrix A = rng.uniform_matrix(n, n);
    const BalanceResult r = sinkhorn(A, 1e-12);
    CHECK(r.residual <= 1e-12);
    CHECK(doubly_stochastic_residual(r.balanced) <= 1e-12);
    CHECK((r.balanced.array() > 0).all());
    const Matrix rebuilt = r.row_scale.asDiagonal() * A * r.col_scale.asDiagonal();
    CHECK((rebuilt - r.balanced).cwiseAbs().maxCoeff() <= 1e-15);
    // recover D1, D2 from entrywise ratios: B_ij / A_ij = d1_i d2_j is rank one
    const Matrix ratio = r.balanced.cwiseQuotient(A);
    const Vector d1 = ratio.col(0);
    const Vector d2 = ratio.row(0).transpose() / ratio(0, 0);
    CHECK(((d1 * d2.transpose() - ratio).cwiseQuotient(ratio)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("idempotence") {
  Rng rng(2);
  const Matrix A = rng.uniform_matrix(9, 9);
  const BalanceResult once = sinkhorn(A);
  const BalanceResult twice = sinkhorn(once.balanced);
  CHECK(twice.iterations <= 2);
  CHECK((twice.balanced - once.balanced).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("error paths") {
  Matrix A = Matrix::Ones(3, 3);
  A(1, 2) = 0.0;
  CHECK_THROWS_AS(sinkhorn(A), NonPositiveInput);
  A(1, 2) = -1.0;
  CHECK_THROWS_AS(sinkhorn(A), NonPositiveInput);
  A(1, 2) = std::nan("");
  CHECK_THROWS_AS(sinkhorn(A), NonPositiveInput);
  CHECK_THROWS_AS(sinkhorn(Matrix::Ones(2, 3)), NonSquareInput);
  Matrix skewed = Matrix::Ones(4, 4);
  skewed(0, 0) = 1e6;
  try {
    sinkhorn(skewed, 1e-15, 1);
    FAIL("expected NotConverged");
  } catch (const NotConverged& e) {
    CHECK(e.iterations() == 1);
  }
}
