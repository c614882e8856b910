#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "pdstiep/manifolds.hpp"

using namespace pdstiep;

namespace {

const Factor kFactors[] = {Factor::C, Factor::Q, Factor::W, Factor::V};

Matrix factor_of(const Point& z, Factor f) {
  switch (f) {
    case Factor::C: return z.C;
    case Factor::Q: return z.Q;
    case Factor::W: return z.W;
    case Factor::V: return z.V;
  }
  return {};
}

TangentVector random_ambient(Rng& rng, Index n) {
  return {rng.normal_matrix(n, n), rng.normal_matrix(n, n), rng.normal_matrix(n, n),
          rng.normal_matrix(n, n)};
}

// Metric length 0.3, further shortened so no entry of C or W moves by more
// than 30% in log scale. Fisher-metric unit steps near the boundary of the
// positive cone are otherwise unbounded in log coordinates.
double walk_scale(const StructureData& sd, const Point& z, const TangentVector& v) {
  double rel = (v.dC.array() / z.C.array()).abs().maxCoeff();
  for (const auto& [r, c] : sd.pair_slots) rel = std::max(rel, std::abs(v.dW(r, c) / z.W(r, c)));
  return std::min(0.3 / product_norm(sd, z, v), 0.3 / rel);
}

}  // namespace

TEST_CASE("projections are idempotent and metric-orthogonal") {
  Rng rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 2 + trial % 9;
    const Index s = (trial % 3) * 2 + 1 <= n ? trial % 3 : 0;
    const StructureData sd = fixture::structure(n, s, 500 + trial);
    const Point z = fixture::point(sd, 900 + trial);
    for (Factor f : kFactors) {
      const Matrix xi = rng.normal_matrix(n, n);
      const Matrix p = project_tangent(f, sd, z, xi);
      const Matrix pp = project_tangent(f, sd, z, p);
      CHECK((pp - p).norm() <= 1e-12 * (1 + p.norm()));
      const Matrix eta = project_tangent(f, sd, z, rng.normal_matrix(n, n));
      const double res = inner(f, sd, z, xi - p, eta);
      const double scale = std::sqrt(std::abs(inner(f, sd, z, xi, xi)) *
                                     std::abs(inner(f, sd, z, eta, eta)));
      CHECK(std::abs(res) <= 1e-11 * (1 + scale));
    }
    const TangentVector v = project_tangent(sd, z, random_ambient(rng, n));
    CHECK(tangent_violations(sd, z, v).empty());
  }
}

TEST_CASE("doubly stochastic projector") {
  const StructureData sd = fixture::structure(6, 1, 3);
  const Point z = fixture::point(sd, 4);
  const DoublyStochasticProjector proj(z.C);
  Rng rng(5);
  const Matrix B = rng.normal_matrix(6, 6);
  const Matrix P = proj.apply(B);
  CHECK(P.rowwise().sum().norm() <= 1e-12 * (1 + B.norm()));
  CHECK(P.colwise().sum().norm() <= 1e-12 * (1 + B.norm()));
  // residual has the form (alpha e^T + e beta^T) .* C
  const Matrix R = (B - P).cwiseQuotient(z.C);
  const Matrix mixed = R.rowwise() - R.row(0);
  CHECK((mixed.colwise() - mixed.col(0)).norm() <= 1e-10);
  CHECK(proj.apply(Matrix::Zero(6, 6)).norm() == 0.0);
}

TEST_CASE("inner products") {
  const StructureData sd = fixture::structure(5, 2, 7);
  const Point z = fixture::point(sd, 8);
  Rng rng(9);
  const Matrix a = rng.normal_matrix(5, 5), b = rng.normal_matrix(5, 5);
  CHECK(inner(Factor::C, sd, z, a, b) ==
        doctest::Approx((a.array() * b.array() / z.C.array()).sum()));
  CHECK(inner(Factor::Q, sd, z, a, b) == doctest::Approx((a.array() * b.array()).sum()));
  double w = 0.0;
  for (const auto& [r, c] : sd.pair_slots) w += a(r, c) * b(r, c) / z.W(r, c);
  CHECK(inner(Factor::W, sd, z, a, b) == doctest::Approx(w));
  CHECK(inner(Factor::C, sd, z, a, b) == doctest::Approx(inner(Factor::C, sd, z, b, a)));
}

TEST_CASE("retractions fix the base point at zero") {
  const StructureData sd = fixture::structure(6, 2, 10);
  const Point z = fixture::point(sd, 11);
  const Point r = product_retract(sd, z, TangentVector::zero(6));
  CHECK((r.C - z.C).norm() <= 1e-12);
  CHECK((r.Q - z.Q).norm() <= 1e-12);
  CHECK((r.W - z.W).norm() == 0.0);
  CHECK((r.V - z.V).norm() == 0.0);
}

TEST_CASE("retraction rigidity is second order") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 3 + trial % 6;
    const StructureData sd = fixture::structure(n, 1, 40 + trial);
    const Point z = fixture::point(sd, 80 + trial);
    for (Factor f : kFactors) {
      if (f == Factor::W && sd.s == 0) continue;
      Matrix xi = project_tangent(f, sd, z, rng.normal_matrix(n, n));
      xi /= xi.norm();
      const Matrix base = factor_of(z, f);
      auto err = [&](double t) { return (retract(f, sd, z, t * xi) - (base + t * xi)).norm(); };
      // least-squares slope through t = 1e-2, 1e-3, 1e-4
      const double e1 = err(1e-2), e3 = err(1e-4);
      if (f == Factor::V) {
        CHECK(e1 <= 1e-15);
        continue;
      }
      const double order = std::log10(e1 / e3) / 2;
      CHECK(order >= 1.9);
    }
  }
}

TEST_CASE("point invariants survive 1000 random retraction steps") {
  Rng rng(21);
  int violations = 0;
  for (int chain = 0; chain < 10; ++chain) {
    const Index n = 3 + chain;
    const StructureData sd = fixture::structure(n, chain % 3 == 0 ? 0 : 1, 60 + chain);
    Point z = fixture::point(sd, 70 + chain);
    for (int step = 0; step < 100; ++step) {
      TangentVector v = project_tangent(sd, z, random_ambient(rng, n));
      v *= walk_scale(sd, z, v);
      z = product_retract(sd, z, v);
      violations += static_cast<int>(point_violations(sd, z).size());
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("tangent_violations flags non-tangent input") {
  const StructureData sd = fixture::structure(5, 1, 2);
  const Point z = fixture::point(sd, 3);
  Rng rng(4);
  const TangentVector raw{rng.normal_matrix(5, 5), rng.normal_matrix(5, 5),
                          rng.normal_matrix(5, 5), rng.normal_matrix(5, 5)};
  CHECK(tangent_violations(sd, z, raw).size() == 4);
}

TEST_CASE("product norm matches the factor inner products") {
  const StructureData sd = fixture::structure(6, 2, 5);
  const Point z = fixture::point(sd, 6);
  Rng rng(7);
  const TangentVector v = project_tangent(sd, z, random_ambient(rng, 6));
  double acc = 0.0;
  acc += inner(Factor::C, sd, z, v.dC, v.dC);
  acc += inner(Factor::Q, sd, z, v.dQ, v.dQ);
  acc += inner(Factor::W, sd, z, v.dW, v.dW);
  acc += inner(Factor::V, sd, z, v.dV, v.dV);
  CHECK(product_norm(sd, z, v) == doctest::Approx(std::sqrt(acc)));
}
