#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "pdstiep/random.hpp"
#include "pdstiep/spectrum.hpp"

namespace fixture {

using namespace pdstiep;

/// Spectrum {1, s pairs, n - 2s - 1 reals} drawn inside the unit disc.
inline StructureData structure(Index n, Index s, std::uint64_t seed,
                               Layout layout = Layout::PairsFirst) {
  if (2 * s + 1 > n) throw std::invalid_argument("fixture::structure: 2s + 1 > n");
  Rng rng(seed);
  std::vector<std::complex<double>> ev{{1.0, 0.0}};
  for (Index k = 0; k < s; ++k) {
    const double re = rng.uniform_open() - 0.5, im = 0.1 + 0.3 * rng.uniform_open();
    ev.emplace_back(re, im);
    ev.emplace_back(re, -im);
  }
  while (static_cast<Index>(ev.size()) < n) ev.emplace_back(rng.uniform_open() - 0.5, 0.0);
  return build_structure(parse_spectrum(ev), layout);
}

/// A generic point: random balanced C, random orthogonal Q, W and V drawn
/// independently of the structure's Schur data.
inline Point point(const StructureData& sd, std::uint64_t seed) {
  Point z = initial_point(sd, SampleMode::Dense, 0, seed);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const Index n = sd.n;
  z.V = sd.S.cwiseProduct(rng.normal_matrix(n, n));
  for (const auto& [r, c] : sd.pair_slots) z.W(r, c) = 0.2 + rng.uniform_open();
  Eigen::HouseholderQR<Matrix> qr(rng.normal_matrix(n, n));
  z.Q = qr.householderQ();
  return z;
}

}  // namespace fixture
