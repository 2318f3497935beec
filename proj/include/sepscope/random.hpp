#pragma once

// Seeded sampling of unitaries and states. Every routine takes the generator
// explicitly; there is no global generator state.

#include <cstdint>
#include <random>

#include "sepscope/linalg.hpp"

namespace sepscope {

using Rng = std::mt19937_64;

/// Complex Gaussian matrix, entries with independent N(0,1) real and
/// imaginary parts.
inline Matrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phases of R's
/// diagonal absorbed into Q).
inline Matrix random_unitary(Index n, Rng& rng) {
  const Matrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Random Hermitian matrix with Gaussian entries (GUE-like).
inline Matrix random_hermitian(Index n, Rng& rng) { return hermitize(ginibre(n, n, rng)); }

/// Normalized G G^dagger with G of shape (d_A d_B) x rank.
inline DensityMatrix random_density(Dims dims, Index rank, Rng& rng) {
  if (rank < 1 || rank > dims.total())
    throw ArgumentError("random state: rank must lie in [1, " + std::to_string(dims.total()) + "]");
  const Matrix g = ginibre(dims.total(), rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::from_hermitized(rho, dims);
}

inline Vector random_unit_vector(Index n, Rng& rng) {
  Vector v = ginibre(n, 1, rng).col(0);
  return v / v.norm();
}

/// Random complete family of mutually orthogonal projectors on C^n with
/// `parts` members (each of rank >= 1).
inline std::vector<Matrix> random_projector_family(Index n, Index parts, Rng& rng) {
  if (parts < 1 || parts > n) throw ArgumentError("projector family: parts must lie in [1, n]");
  const Matrix u = random_unitary(n, rng);
  // random composition of n into `parts` positive sizes
  std::vector<Index> cuts(n - 1);
  std::iota(cuts.begin(), cuts.end(), Index{1});
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(parts - 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(n);
  std::vector<Matrix> family;
  for (Index k = 0; k < parts; ++k) {
    const Matrix cols = u.middleCols(cuts[k], cuts[k + 1] - cuts[k]);
    family.push_back(cols * cols.adjoint());
  }
  return family;
}

}  // namespace sepscope
