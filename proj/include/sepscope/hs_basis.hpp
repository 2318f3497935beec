#pragma once

// Hilbert-Schmidt operator bases and the (r, s, T) expansion of bipartite
// states on C^d (x) C^d.
//
// Spin basis (any d):
//   rho = 1/d^2 ( 1(x)1 + sum_i r_i S_i (x) 1 + sum_i s_i 1 (x) S_i^*
//                 + sum_mn t_mn S_n (x) S_m^* )
// with S = (S_01, S_02, ..., S_{d-1,d-1}), S_jk = sum_r w^{jr} |r><r+k mod d|.
//
// Pauli basis (d = 2 only):
//   rho = 1/4 ( 1(x)1 + r.sigma (x) 1 + 1 (x) s.sigma + sum_mn t_mn sigma_n (x) sigma_m )
// with sigma = (sigma_1, sigma_2, sigma_3); all coefficients are real for
// Hermitian rho.
//
// In both cases t_mn multiplies (n-th basis element) (x) (m-th basis element):
// the first index of T labels the second tensor factor.

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "sepscope/linalg.hpp"
#include "sepscope/realign.hpp"

namespace sepscope {

enum class HsBasis { pauli, spin };

inline const char* to_string(HsBasis b) { return b == HsBasis::pauli ? "pauli" : "spin"; }

/// S_jk = sum_r exp(2 pi i j r / d) |r><r (+) k|
inline Matrix spin_matrix(Index d, Index j, Index k) {
  if (d < 1) throw ArgumentError("spin_matrix: dimension must be positive");
  if (j < 0 || j >= d || k < 0 || k >= d)
    throw ArgumentError("spin_matrix: indices (" + std::to_string(j) + "," + std::to_string(k) +
                        ") out of range for d=" + std::to_string(d));
  Matrix s = Matrix::Zero(d, d);
  for (Index r = 0; r < d; ++r) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(j * r) / static_cast<double>(d);
    s(r, (r + k) % d) = std::polar(1.0, phase);
  }
  return s;
}

inline std::array<Matrix, 3> pauli_matrices() {
  const cplx i(0.0, 1.0);
  Matrix s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  return {s1, s2, s3};
}

/// Identity first, then the d^2 - 1 traceless elements in basis order.
struct SpinBasis {
  Index dim = 0;
  std::vector<Matrix> matrices;

  const Matrix& identity() const { return matrices.front(); }
  std::span<const Matrix> traceless() const { return std::span(matrices).subspan(1); }
};

inline SpinBasis make_spin_basis(Index d) {
  SpinBasis b{d, {}};
  b.matrices.reserve(d * d);
  for (Index j = 0; j < d; ++j)
    for (Index k = 0; k < d; ++k) b.matrices.push_back(spin_matrix(d, j, k));
  return b;
}

/// Per-dimension cache; construction is deterministic.
inline const SpinBasis& spin_basis(Index d) {
  static std::mutex mu;
  static std::map<Index, std::unique_ptr<SpinBasis>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[d];
  if (!slot) slot = std::make_unique<SpinBasis>(make_spin_basis(d));
  return *slot;
}

inline SpinBasis pauli_basis() {
  auto p = pauli_matrices();
  return {2, {Matrix::Identity(2, 2), p[0], p[1], p[2]}};
}

inline SpinBasis basis_for(HsBasis kind, Index d) {
  if (kind == HsBasis::pauli) {
    if (d != 2) throw UnsupportedDimensionError("Pauli basis requires d = 2");
    return pauli_basis();
  }
  return spin_basis(d);
}

struct HSDecomposition {
  HsBasis basis = HsBasis::spin;
  Index dim = 0;
  Vector r;  // d^2 - 1
  Vector s;  // d^2 - 1
  Matrix t;  // (d^2 - 1) x (d^2 - 1)
};

namespace detail {

/// tr((x (x) y) rho) for d x d factors.
inline cplx expect_product(const Matrix& x, const Matrix& y, const Matrix& rho, Index d) {
  cplx acc = 0.0;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      const cplx xji = x(j, i);
      if (xji == cplx(0.0)) continue;
      for (Index k = 0; k < d; ++k)
        for (Index l = 0; l < d; ++l) {
          const cplx ylk = y(l, k);
          if (ylk == cplx(0.0)) continue;
          acc += xji * ylk * rho(i * d + k, j * d + l);
        }
    }
  return acc;
}

/// Second-factor partner of a basis element: S^* for spin, sigma for Pauli.
inline Matrix second_factor(HsBasis kind, const Matrix& s) {
  return kind == HsBasis::spin ? Matrix(s.conjugate()) : s;
}

}  // namespace detail

/// Expansion coefficients by Hilbert-Schmidt projection. Defaults to the
/// Pauli basis at d = 2 and the spin basis otherwise.
inline HSDecomposition decompose(const TraceClassOperator& rho, HsBasis kind) {
  if (!rho.dims().square())
    throw UnsupportedDimensionError("decompose: requires d_A == d_B");
  const Index d = rho.dim_a();
  const SpinBasis basis = basis_for(kind, d);
  const Matrix& m = rho.matrix();
  const cplx tr = m.trace();
  if (std::abs(tr - cplx(1.0)) > kTraceTol)
    throw InvariantError("decompose: coefficient of 1(x)1 must be 1 (trace is " +
                         std::to_string(tr.real()) + ")");

  const Index n = d * d - 1;
  const Matrix id = Matrix::Identity(d, d);
  HSDecomposition dec{kind, d, Vector(n), Vector(n), Matrix(n, n)};
  // Orthogonality tr(B_a^dagger B_b) = d delta_ab gives each coefficient as
  // tr((B_a^dagger (x) C_b^dagger) rho) where C is the second-factor partner.
  for (Index a = 0; a < n; ++a) {
    const Matrix& ba = basis.matrices[a + 1];
    const Matrix ca = detail::second_factor(kind, ba);
    dec.r(a) = detail::expect_product(ba.adjoint(), id, m, d);
    dec.s(a) = detail::expect_product(id, ca.adjoint(), m, d);
  }
  for (Index mm = 0; mm < n; ++mm) {
    const Matrix cm = detail::second_factor(kind, basis.matrices[mm + 1]).adjoint();
    for (Index nn = 0; nn < n; ++nn)
      dec.t(mm, nn) = detail::expect_product(basis.matrices[nn + 1].adjoint(), cm, m, d);
  }
  return dec;
}

inline HSDecomposition decompose(const TraceClassOperator& rho) {
  return decompose(rho, rho.dim_a() == 2 ? HsBasis::pauli : HsBasis::spin);
}

inline void check_shape(const HSDecomposition& dec) {
  const Index n = dec.dim * dec.dim - 1;
  if (dec.dim < 1 || dec.r.size() != n || dec.s.size() != n || dec.t.rows() != n || dec.t.cols() != n)
    throw DimensionError("HSDecomposition: inconsistent coefficient sizes for d=" +
                         std::to_string(dec.dim));
  if (dec.basis == HsBasis::pauli && dec.dim != 2)
    throw DimensionError("HSDecomposition: Pauli basis requires d = 2");
}

/// Sums the expansion back into a d^2 x d^2 matrix.
inline Matrix reconstruct(const HSDecomposition& dec) {
  check_shape(dec);
  const Index d = dec.dim, n = d * d - 1;
  const SpinBasis basis = basis_for(dec.basis, d);
  const Matrix id = Matrix::Identity(d, d);
  Matrix out = tensor(id, id);
  for (Index a = 0; a < n; ++a) {
    const Matrix& ba = basis.matrices[a + 1];
    out += dec.r(a) * tensor(ba, id);
    out += dec.s(a) * tensor(id, detail::second_factor(dec.basis, ba));
  }
  for (Index mm = 0; mm < n; ++mm) {
    const Matrix cm = detail::second_factor(dec.basis, basis.matrices[mm + 1]);
    for (Index nn = 0; nn < n; ++nn)
      if (dec.t(mm, nn) != cplx(0.0)) out += dec.t(mm, nn) * tensor(basis.matrices[nn + 1], cm);
  }
  return out / static_cast<double>(d * d);
}

inline double t_trace_norm(const HSDecomposition& dec) { return trace_norm(dec.t); }

inline Vector vec(const Matrix& m) {
  Vector v(m.size());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

/// Builds the realigned matrix directly from the expansion, using
/// realign(x (x) y) = |x><y^*|:
///   1/d^2 ( |1><1| + sum r_i |S_i><1| + sum s_i |1><S_i| + sum t_mn |S_n><S_m| )
/// for the spin basis (with sigma_m^* in the bras for the Pauli basis).
inline RealignedMatrix realigned_from_decomposition(const HSDecomposition& dec) {
  check_shape(dec);
  const Index d = dec.dim, n = d * d - 1;
  const SpinBasis basis = basis_for(dec.basis, d);
  // bra partner: realign(x (x) y) = vec(x) vec(y)^T = |x><conj(y)|
  auto bra = [&](const Matrix& second) -> Vector { return vec(second.conjugate()); };
  const Vector one = vec(basis.identity());
  std::vector<Vector> kets, bras;
  for (Index a = 0; a < n; ++a) {
    kets.push_back(vec(basis.matrices[a + 1]));
    bras.push_back(bra(detail::second_factor(dec.basis, basis.matrices[a + 1])));
  }
  Matrix a = one * one.adjoint();
  for (Index i = 0; i < n; ++i) {
    a += dec.r(i) * kets[i] * one.adjoint();
    a += dec.s(i) * one * bras[i].adjoint();
  }
  for (Index mm = 0; mm < n; ++mm)
    for (Index nn = 0; nn < n; ++nn) a += dec.t(mm, nn) * kets[nn] * bras[mm].adjoint();
  a /= static_cast<double>(d * d);
  RealignedMatrix out{Dims{d, d}, std::move(a), {}};
  out.singular_values = singular_values(out.mat);
  return out;
}

/// Coordinates W^dagger A W of a realigned matrix in the orthonormal basis
/// W = (vec(1)/sqrt(d), vec(B_1)/sqrt(d), ...), used on both sides.
inline Matrix hs_coordinates(const RealignedMatrix& a, HsBasis kind) {
  if (!a.dims.square()) throw UnsupportedDimensionError("hs_coordinates: requires d_A == d_B");
  const Index d = a.dims.a;
  const SpinBasis basis = basis_for(kind, d);
  Matrix w(d * d, d * d);
  for (Index c = 0; c < d * d; ++c) w.col(c) = vec(basis.matrices[c]) / std::sqrt(static_cast<double>(d));
  return w.adjoint() * a.mat * w;
}

/// Converts a d = 2 spin-basis expansion to the Pauli basis. With
/// S = M sigma (S_01 = sigma_1, S_10 = sigma_3, S_11 = i sigma_2) and
/// sigma^* = D sigma, D = diag(1, -1, 1):
///   r' = M^T r,  s' = D M^dagger s,  T' = D M^dagger T M.
inline HSDecomposition spin_to_pauli(const HSDecomposition& dec) {
  check_shape(dec);
  if (dec.basis == HsBasis::pauli) return dec;
  if (dec.dim != 2) throw UnsupportedDimensionError("spin_to_pauli: requires d = 2");
  const cplx i(0.0, 1.0);
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 2) = 1.0;
  m(2, 1) = i;
  Matrix dmat = Matrix::Identity(3, 3);
  dmat(1, 1) = -1.0;
  return {HsBasis::pauli, 2, m.transpose() * dec.r, dmat * m.adjoint() * dec.s,
          dmat * m.adjoint() * dec.t * m};
}

}  // namespace sepscope
