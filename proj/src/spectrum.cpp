#include "pdstiep/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "pdstiep/balance.hpp"
#include "pdstiep/dense_linalg.hpp"
#include "pdstiep/errors.hpp"
#include "pdstiep/random.hpp"

namespace pdstiep {

namespace {

constexpr double kPairTol = 1e-10;
constexpr double kUnitTol = 1e-12;

std::string fmt(std::complex<double> z) {
  std::ostringstream os;
  os << std::setprecision(17) << z.real() << (z.imag() < 0 ? " - " : " + ")
     << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

std::vector<std::complex<double>> Spectrum::values() const {
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<std::size_t>(n()));
  for (const auto& p : pairs) {
    out.emplace_back(p.re, p.im);
    out.emplace_back(p.re, -p.im);
  }
  for (double r : reals) out.emplace_back(r, 0.0);
  return out;
}

Spectrum parse_spectrum(std::span<const std::complex<double>> raw,
                        std::vector<std::string>* warnings) {
  if (raw.empty()) throw InputError("parse_spectrum: empty eigenvalue list");
  for (const auto& z : raw)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InputError("parse_spectrum: non-finite eigenvalue");

  Spectrum out;
  std::vector<bool> used(raw.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    const auto z = raw[i];
    if (std::abs(z.imag()) <= kPairTol) {
      out.reals.push_back(z.real());
      used[i] = true;
      continue;
    }
    // nearest unused conjugate partner; first index wins ties
    std::size_t best = raw.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (used[j]) continue;
      const double dre = std::abs(raw[j].real() - z.real());
      const double dim = std::abs(raw[j].imag() + z.imag());
      if (dre <= kPairTol && dim <= kPairTol && dre + dim < best_dist) {
        best = j;
        best_dist = dre + dim;
      }
    }
    if (best == raw.size())
      throw UnpairedComplexError("parse_spectrum: " + fmt(z) + " has no conjugate partner");
    used[i] = used[best] = true;
    const double re = 0.5 * (z.real() + raw[best].real());
    const double im = 0.5 * (std::abs(z.imag()) + std::abs(raw[best].imag()));
    out.pairs.push_back({re, im});
  }
  std::sort(out.reals.begin(), out.reals.end(), std::greater<>());

  const bool has_unit = std::any_of(out.reals.begin(), out.reals.end(),
                                    [](double r) { return std::abs(r - 1.0) <= kUnitTol; });
  if (!has_unit)
    throw MissingUnitEigenvalueError("parse_spectrum: 1 is not among the real eigenvalues");

  if (warnings) {
    for (const auto& z : raw)
      if (std::abs(z) > 1.0 + 1e-10)
        warnings->push_back("eigenvalue " + fmt(z) +
                            " lies outside the unit disc; the list is not realizable by a "
                            "doubly stochastic matrix");
  }
  return out;
}

StructureData build_structure(const Spectrum& spec, Layout layout) {
  StructureData sd;
  sd.n = spec.n();
  sd.s = spec.s();
  sd.layout = layout;
  const Index n = sd.n;
  sd.lambda = Matrix::Zero(n, n);
  sd.b.resize(sd.s);
  sd.S = Matrix::Zero(n, n);
  sd.M = Matrix::Zero(n, n);

  std::vector<double> reals = spec.reals;
  Index pos = 0;
  if (layout == Layout::UnitFirst && !reals.empty()) {
    auto lead = std::min_element(reals.begin(), reals.end(), [](double a, double b) {
      return std::abs(a - 1.0) < std::abs(b - 1.0);
    });
    sd.lambda(pos, pos) = *lead;
    sd.block_sizes.push_back(1);
    reals.erase(lead);
    ++pos;
  }
  for (Index k = 0; k < sd.s; ++k) {
    const auto& p = spec.pairs[static_cast<std::size_t>(k)];
    sd.lambda(pos, pos) = p.re;
    sd.lambda(pos + 1, pos + 1) = p.re;
    sd.b(k) = p.im;
    sd.pair_slots.emplace_back(pos, pos + 1);
    sd.M(pos, pos + 1) = 1.0;
    sd.block_sizes.push_back(2);
    pos += 2;
  }
  for (double r : reals) {
    sd.lambda(pos, pos) = r;
    sd.block_sizes.push_back(1);
    ++pos;
  }
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < j; ++i) sd.S(i, j) = 1.0;
  for (const auto& [r, c] : sd.pair_slots) sd.S(r, c) = 0.0;
  return sd;
}

Index manifold_dimension(const StructureData& sd) { return (2 * sd.n - 1) * (sd.n - 1); }

namespace {

Matrix random_positive(Rng& rng, Index n, SampleMode mode, Index p) {
  if (mode == SampleMode::Dense) return rng.uniform_matrix(n, n);
  if (p < 1 || p >= n) throw InputError("lowrank mode requires 1 <= p < n");
  const Matrix left = rng.uniform_matrix(n, p);
  const Matrix right = rng.uniform_matrix(p, n);
  return left * right;
}

}  // namespace

RandomProblem random_problem(Index n, SampleMode mode, Index p, std::uint64_t seed) {
  if (n < 2) throw InputError("random_problem: n must be at least 2");
  Rng rng(seed);
  const Matrix balanced = sinkhorn(random_positive(rng, n, mode, p)).balanced;
  const SchurForm form = real_schur(balanced);
  auto values = quasi_eigenvalues(form.T, form.block_sizes);

  // Snap rounding noise: the Perron root is exactly 1, and in lowrank mode
  // the n - p zero eigenvalues come out at rounding level.
  std::size_t perron = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (std::abs(values[i] - 1.0) < std::abs(values[perron] - 1.0)) perron = i;
  values[perron] = 1.0;
  for (auto& z : values)
    if (std::abs(z) <= 1e-10) z = 0.0;

  return {parse_spectrum(values), balanced};
}

Point initial_point(const StructureData& sd, SampleMode mode, Index p, std::uint64_t seed) {
  const Index n = sd.n;
  Rng rng(seed);
  Point z;
  Matrix T0;
  if (n == 1) {
    z.C = Matrix::Ones(1, 1);
    z.Q = Matrix::Identity(1, 1);
    T0 = z.C;
  } else {
    z.C = sinkhorn(random_positive(rng, n, mode, p)).balanced;
    if (sd.layout == Layout::UnitFirst) {
      // Deflate the Perron pair (1, e/sqrt(n)) with a reflector H, H e1 = e/sqrt(n),
      // so the leading Schur vector is e/sqrt(n) whatever order QR would pick.
      Vector v = -Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
      v(0) += 1.0;
      Matrix H = Matrix::Identity(n, n);
      if (v.norm() > 0.0) H -= (2.0 / v.squaredNorm()) * v * v.transpose();
      const Matrix reduced = H * z.C * H;
      const SchurForm tail = real_schur(reduced.bottomRightCorner(n - 1, n - 1));
      Matrix Y = Matrix::Identity(n, n);
      Y.bottomRightCorner(n - 1, n - 1) = tail.Q;
      z.Q = H * Y;
      T0 = z.Q.transpose() * z.C * z.Q;
    } else {
      SchurForm form = real_schur(z.C);
      z.Q = std::move(form.Q);
      T0 = std::move(form.T);
    }
  }
  z.V = sd.S.cwiseProduct(T0);
  z.W = Matrix::Zero(n, n);
  for (Index k = 0; k < sd.s; ++k) {
    const auto [r, c] = sd.pair_slots[static_cast<std::size_t>(k)];
    z.W(r, c) = std::abs(sd.b(k));
  }
  return z;
}

std::vector<std::string> point_violations(const StructureData& sd, const Point& z, double tol) {
  std::vector<std::string> out;
  const Index n = sd.n;
  if (z.C.rows() != n || z.C.cols() != n || z.Q.rows() != n || z.W.rows() != n ||
      z.V.rows() != n) {
    out.push_back("dimension mismatch");
    return out;
  }
  if (!z.C.allFinite() || !z.Q.allFinite() || !z.W.allFinite() || !z.V.allFinite())
    out.push_back("non-finite entries");
  if ((z.C.array() <= 0.0).any()) out.push_back("C not entrywise positive");
  if (doubly_stochastic_residual(z.C) > tol) out.push_back("C row/column sums deviate from 1");
  if ((z.Q.transpose() * z.Q - Matrix::Identity(n, n)).norm() > tol)
    out.push_back("Q not orthogonal");
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (sd.M(i, j) != 0.0) {
        if (!(z.W(i, j) > 0.0)) out.push_back("W not positive on a pair slot");
      } else if (z.W(i, j) != 0.0) {
        out.push_back("W nonzero off the pair slots");
      }
      if (sd.S(i, j) == 0.0 && z.V(i, j) != 0.0) out.push_back("V nonzero outside its support");
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace pdstiep
