#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pdstiep/types.hpp"

namespace pdstiep {

/// A complex conjugate pair re +/- im*i, stored once with im > 0.
struct ConjugatePair {
  double re = 0.0;
  double im = 0.0;
};

/// Conjugation-closed eigenvalue list split into pairs and reals.
struct Spectrum {
  std::vector<ConjugatePair> pairs;
  std::vector<double> reals;  // descending

  Index n() const { return static_cast<Index>(2 * pairs.size() + reals.size()); }
  Index s() const { return static_cast<Index>(pairs.size()); }

  /// Flat list: each pair as (re+im i, re-im i), then the reals.
  std::vector<std::complex<double>> values() const;
};

/// Splits a raw list into conjugate pairs and reals.
///
/// Nonreal values are matched greedily to their nearest conjugate (ties by
/// index) within 1e-10 on both parts. A value whose imaginary part is within
/// 1e-10 of zero is treated as real. Throws UnpairedComplexError or
/// MissingUnitEigenvalueError; values of modulus above 1 + 1e-10 only produce
/// a message in `warnings`.
Spectrum parse_spectrum(std::span<const std::complex<double>> raw,
                        std::vector<std::string>* warnings = nullptr);

/// Placement of the diagonal blocks of Lambda.
enum class Layout {
  /// Pairs first in input order, then reals descending.
  PairsFirst,
  /// The real eigenvalue closest to 1 first, then the pairs, then the
  /// remaining reals descending. Puts the Perron root in the leading Schur
  /// position so the first invariant subspace is span{e}.
  UnitFirst,
};

/// Fixed combinatorial scaffolding of one problem instance. Pair slots are
/// 0-based (row, col) with col = row + 1; with Layout::PairsFirst slot k is
/// (2k, 2k+1).
struct StructureData {
  Matrix lambda;
  Vector b;
  std::vector<std::pair<Index, Index>> pair_slots;
  Matrix S;  ///< 1 strictly above the diagonal off the pair slots
  Matrix M;  ///< 1 exactly on the pair slots
  std::vector<int> block_sizes;  ///< Schur block sizes of Lambda, in order
  Index n = 0;
  Index s = 0;
  Layout layout = Layout::PairsFirst;
};

StructureData build_structure(const Spectrum& spec, Layout layout = Layout::PairsFirst);

/// (2n-1)(n-1), the dimension of the product manifold.
Index manifold_dimension(const StructureData& sd);

enum class SampleMode { Dense, LowRank };

struct RandomProblem {
  Spectrum spectrum;
  Matrix target;  ///< the balanced matrix whose spectrum was taken
};

/// Random realizable instance: balanced uniform(0,1) matrix (dense) or
/// balanced product of n x p and p x n uniform factors (lowrank).
RandomProblem random_problem(Index n, SampleMode mode, Index p, std::uint64_t seed);

/// Random starting point: C0 = balanced random matrix of the given mode,
/// (Q0, T0) its standardized real Schur form, V0 = S .* T0 and W0 = |b_k|
/// on pair slot k. With Layout::UnitFirst the Perron pair is deflated first,
/// so Q0 e1 = e/sqrt(n) and T0(0, 0) = 1; the Schur order of the remaining
/// eigenvalues is whatever QR produces.
Point initial_point(const StructureData& sd, SampleMode mode, Index p, std::uint64_t seed);

/// Human-readable list of violated Point invariants (empty when valid).
std::vector<std::string> point_violations(const StructureData& sd, const Point& z,
                                          double tol = 1e-10);

}  // namespace pdstiep
