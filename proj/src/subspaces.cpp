#include "pdstiep/subspaces.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "pdstiep/errors.hpp"
#include "pdstiep/operator.hpp"

namespace pdstiep {

std::vector<Index> BlockPartition::offsets() const {
  std::vector<Index> out(sizes.size() + 1, 0);
  std::partial_sum(sizes.begin(), sizes.end(), out.begin() + 1);
  return out;
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

}  // namespace

BlockPartition partition_blocks(const SchurForm& form, double cluster_tol) {
  const Index n = form.T.rows();
  if (form.T.cols() != n) throw NonSquareInput("partition_blocks: T is not square");
  const std::vector<int> sizes =
      form.block_sizes.empty() ? detect_blocks(form.T) : form.block_sizes;
  const auto values = quasi_eigenvalues(form.T, sizes);

  // owner[e] = Schur block holding eigenvalue e
  std::vector<std::size_t> owner;
  for (std::size_t b = 0; b < sizes.size(); ++b)
    for (int k = 0; k < sizes[b]; ++k) owner.push_back(b);

  UnionFind uf(sizes.size());
  for (std::size_t a = 0; a < values.size(); ++a)
    for (std::size_t b = a + 1; b < values.size(); ++b)
      if (std::abs(values[a] - values[b]) <= cluster_tol) uf.unite(owner[a], owner[b]);

  BlockPartition out;
  std::vector<std::size_t> seen_roots;
  std::size_t e = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    const std::size_t root = uf.find(b);
    const bool continues = b > 0 && uf.find(b - 1) == root;
    if (!continues) {
      if (std::find(seen_roots.begin(), seen_roots.end(), root) != seen_roots.end())
        throw InterleavedClusterError("partition_blocks: Schur block " + std::to_string(b) +
                                      " belongs to a cluster interrupted by another one");
      seen_roots.push_back(root);
      out.sizes.push_back(0);
      out.clusters.emplace_back();
    }
    out.sizes.back() += sizes[b];
    for (int k = 0; k < sizes[b]; ++k) out.clusters.back().push_back(values[e++]);
  }
  return out;
}

Matrix SubspaceResult::theta_block(std::size_t i) const {
  const auto off = partition.offsets();
  return theta.middleCols(off[i], partition.sizes[i]);
}

SubspaceResult invariant_subspaces(const Matrix& C, const SchurForm& form,
                                   const BlockPartition& partition) {
  const Index n = form.T.rows();
  if (C.rows() != n || C.cols() != n) throw NonSquareInput("invariant_subspaces: size mismatch");
  const auto off = partition.offsets();
  if (off.back() != n) throw InputError("invariant_subspaces: partition does not cover T");
  const std::size_t q = partition.sizes.size();

  Matrix T = form.T;
  Matrix theta = form.Q;
  auto blk = [&](Matrix& m, std::size_t i, std::size_t j) {
    return m.block(off[i], off[j], partition.sizes[i], partition.sizes[j]);
  };
  auto cols = [&](Matrix& m, std::size_t j) { return m.middleCols(off[j], partition.sizes[j]); };

  for (std::size_t j = 1; j < q; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const Matrix Z = sylvester_solve(blk(T, i, i), blk(T, j, j), blk(T, i, j));
      for (std::size_t k = j + 1; k < q; ++k) blk(T, i, k) -= Z * blk(T, j, k);
      cols(theta, j) += cols(theta, i) * Z;
    }
  }

  for (std::size_t i = 0; i < q; ++i) {
    auto block = cols(theta, i);
    Index row = 0;
    block.col(0).cwiseAbs().maxCoeff(&row);
    if (block(row, 0) < 0.0) block *= -1.0;
  }

  SubspaceResult out;
  out.partition = partition;
  for (std::size_t i = 0; i < q; ++i) out.blocks.push_back(blk(T, i, i));
  const Matrix Y = form.Q.transpose() * theta;
  out.block_diagonal = Y.partialPivLu().solve(form.T * Y);
  out.theta = std::move(theta);
  return out;
}

std::vector<double> block_residuals(const Matrix& C, const SubspaceResult& r) {
  std::vector<double> out;
  for (std::size_t i = 0; i < r.blocks.size(); ++i) {
    const Matrix th = r.theta_block(i);
    out.push_back((C * th - th * r.blocks[i]).norm());
  }
  return out;
}

namespace {

// A Z - Z B = -R for general square A, B via their real Schur forms.
Matrix general_sylvester(const Matrix& A, const Matrix& B, const Matrix& R) {
  const SchurForm a = real_schur(A);
  const SchurForm b = real_schur(B);
  const Matrix Zt = sylvester_solve(a.T, b.T, a.Q.transpose() * R * b.Q);
  return a.Q * Zt * b.Q.transpose();
}

}  // namespace

SchurForm refine_schur(const Matrix& C, const SchurForm& approx, const BlockPartition& partition,
                       int max_sweeps) {
  const Index n = C.rows();
  if (C.cols() != n || approx.Q.rows() != n || approx.Q.cols() != n)
    throw NonSquareInput("refine_schur: size mismatch");
  const auto off = partition.offsets();
  if (off.back() != n) throw InputError("refine_schur: partition does not cover C");
  const std::size_t q = partition.sizes.size();
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + C.norm());

  Matrix Q = approx.Q;
  Matrix T = Q.transpose() * C * Q;
  // Make the leading columns of each trailing window invariant, one split at a time.
  for (std::size_t b = 1; b < q; ++b) {
    const Index p0 = off[b - 1], k = off[b] - p0, m = n - off[b];
    double gap = 0.0;
    for (int sweep = 0;; ++sweep) {
      const Matrix E = T.block(off[b], p0, m, k);
      gap = E.norm();
      if (gap <= floor || sweep == max_sweeps) break;
      const Matrix X = general_sylvester(T.block(off[b], off[b], m, m), T.block(p0, p0, k, k), E);
      Matrix K = Matrix::Identity(k + m, k + m);
      K.topRightCorner(k, m) = -X.transpose();
      K.bottomLeftCorner(m, k) = X;
      Q.rightCols(n - p0) = Q.rightCols(n - p0) * qf(K);
      T = Q.transpose() * C * Q;
    }
    if (gap > 1e3 * floor)
      throw NotConverged("refine_schur: block " + std::to_string(b) + " coupling stuck at " +
                             std::to_string(gap),
                         max_sweeps);
  }
  // Quasi-triangularize every diagonal block in place.
  std::vector<int> sizes;
  for (std::size_t i = 0; i < q; ++i) {
    const SchurForm d = real_schur(T.block(off[i], off[i], partition.sizes[i], partition.sizes[i]));
    Q.middleCols(off[i], partition.sizes[i]) = Q.middleCols(off[i], partition.sizes[i]) * d.Q;
    sizes.insert(sizes.end(), d.block_sizes.begin(), d.block_sizes.end());
  }
  T = Q.transpose() * C * Q;
  Index r = 0;
  for (int sz : sizes) {
    T.block(r + sz, r, n - r - sz, sz).setZero();
    r += sz;
  }
  return {std::move(Q), std::move(T), std::move(sizes)};
}

SchurForm schur_from_point(const StructureData& sd, const Point& z) {
  return {z.Q, sd.lambda + apply_A(sd, z.W) + z.W + z.V, sd.block_sizes};
}

}  // namespace pdstiep
