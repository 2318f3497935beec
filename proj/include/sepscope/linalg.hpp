#pragma once

// Dense complex linear algebra for bipartite operators.
//
// Index convention (used by every module): the product basis vector |i>|k>
// of C^{d_A} (x) C^{d_B} sits at composite index i * d_B + k (0-based, first
// factor slowest). Multi-factor spaces follow the same row-major rule.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "sepscope/errors.hpp"

namespace sepscope {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

enum class Side { first, second };

inline const char* to_string(Side s) { return s == Side::first ? "first" : "second"; }

struct Dims {
  Index a = 1;
  Index b = 1;

  Index total() const { return a * b; }
  bool square() const { return a == b; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

inline std::string describe(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

/// max_ij |m_ij - conj(m_ji)|
inline double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

/// Eigenvalues of the Hermitian part of m, ascending.
inline RealVector hermitian_eigenvalues(const Matrix& m) {
  if (!m.allFinite()) throw NumericError("eigensolve: non-finite entries in " + describe(m));
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("eigensolve did not converge for " + describe(m) + " matrix");
  return es.eigenvalues();
}

/// Singular values, nonincreasing.
inline RealVector singular_values(const Matrix& m) {
  if (!m.allFinite()) throw NumericError("SVD: non-finite entries in " + describe(m));
  if (m.size() == 0) return RealVector();
  Eigen::BDCSVD<Matrix> svd(m);
  if (svd.info() != Eigen::Success)
    throw NumericError("SVD did not converge for " + describe(m) + " matrix");
  return svd.singularValues();
}

/// Hilbert-Schmidt inner product tr(a^dagger b).
inline cplx hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("hs_inner: shape mismatch " + describe(a) + " vs " + describe(b));
  return (a.conjugate().cwiseProduct(b)).sum();
}

inline double trace_norm(const Matrix& m) { return singular_values(m).sum(); }

inline double frobenius_norm(const Matrix& m) { return std::sqrt(hs_inner(m, m).real()); }

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// Kronecker product, first argument on the slow index.
inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Square operator on C^{d_A} (x) C^{d_B} with finite entries and no further
/// constraint. Holds the arbitrary trace-class operators used when extending
/// the fidelity beyond states.
class TraceClassOperator {
 public:
  TraceClassOperator(Matrix m, Dims dims) : mat_(std::move(m)), dims_(dims) {
    if (dims_.a < 1 || dims_.b < 1)
      throw DimensionError("subsystem dimensions must be positive");
    if (mat_.rows() != mat_.cols() || mat_.rows() != dims_.total()) {
      std::ostringstream os;
      os << "operator is " << describe(mat_) << " but dims " << dims_.a << "x" << dims_.b
         << " require side " << dims_.total();
      throw DimensionError(os.str());
    }
    if (!mat_.allFinite()) throw InvariantError("operator has non-finite entries");
  }

  const Matrix& matrix() const { return mat_; }
  Dims dims() const { return dims_; }
  Index dim_a() const { return dims_.a; }
  Index dim_b() const { return dims_.b; }

 private:
  Matrix mat_;
  Dims dims_;
};

/// Unit-trace Hermitian positive semidefinite operator with declared
/// bipartite dimensions. Construction validates every invariant.
class DensityMatrix : public TraceClassOperator {
 public:
  DensityMatrix(Matrix m, Dims dims) : TraceClassOperator(std::move(m), dims) {
    const Matrix& r = matrix();
    const double herm = hermiticity_defect(r);
    if (herm > kHermTol) {
      std::ostringstream os;
      os << "not Hermitian: max |rho - rho^dagger| = " << herm << " > " << kHermTol;
      throw InvariantError(os.str());
    }
    const cplx tr = r.trace();
    if (std::abs(tr - cplx(1.0, 0.0)) > kTraceTol) {
      std::ostringstream os;
      os.precision(15);
      os << "trace is " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag()
         << "i, expected 1 within " << kTraceTol;
      throw InvariantError(os.str());
    }
    const double lmin = hermitian_eigenvalues(r)(0);
    if (lmin < -kPsdTol) {
      std::ostringstream os;
      os << "not positive semidefinite: minimum eigenvalue " << lmin << " < " << -kPsdTol;
      throw InvariantError(os.str());
    }
  }

  /// Convenience for construction sites whose output is Hermitian up to
  /// rounding (products such as U rho U^dagger).
  static DensityMatrix from_hermitized(const Matrix& m, Dims dims) {
    return DensityMatrix(hermitize(m), dims);
  }
};

// ---------------------------------------------------------------------------
// Subsystem index maps

inline Index product_of(std::span<const Index> dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

/// Row-major multi-index of `flat` in a space with the given factor dims.
inline void unflatten(Index flat, std::span<const Index> dims, std::span<Index> out) {
  for (std::size_t f = dims.size(); f-- > 0;) {
    out[f] = flat % dims[f];
    flat /= dims[f];
  }
}

inline Index flatten(std::span<const Index> idx, std::span<const Index> dims) {
  Index flat = 0;
  for (std::size_t f = 0; f < dims.size(); ++f) flat = flat * dims[f] + idx[f];
  return flat;
}

/// Partial transpose of a bipartite operator. For Side::second the output
/// entry <ik|out|jl> is <il|m|jk>.
inline Matrix partial_transpose(const Matrix& m, Dims dims, Side side) {
  if (m.rows() != dims.total() || m.cols() != dims.total())
    throw DimensionError("partial_transpose: matrix " + describe(m) + " does not match dims");
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < dims.a; ++i)
    for (Index k = 0; k < dims.b; ++k)
      for (Index j = 0; j < dims.a; ++j)
        for (Index l = 0; l < dims.b; ++l) {
          const Index row = i * dims.b + k, col = j * dims.b + l;
          if (side == Side::second)
            out(row, col) = m(i * dims.b + l, j * dims.b + k);
          else
            out(row, col) = m(j * dims.b + k, i * dims.b + l);
        }
  return out;
}

inline Matrix partial_transpose(const TraceClassOperator& rho, Side side) {
  return partial_transpose(rho.matrix(), rho.dims(), side);
}

/// Traces out the factor on `side`; the result lives on the other factor.
inline Matrix partial_trace(const Matrix& m, Dims dims, Side side) {
  if (m.rows() != dims.total() || m.cols() != dims.total())
    throw DimensionError("partial_trace: matrix " + describe(m) + " does not match dims");
  if (side == Side::second) {
    Matrix out = Matrix::Zero(dims.a, dims.a);
    for (Index i = 0; i < dims.a; ++i)
      for (Index j = 0; j < dims.a; ++j)
        for (Index k = 0; k < dims.b; ++k) out(i, j) += m(i * dims.b + k, j * dims.b + k);
    return out;
  }
  Matrix out = Matrix::Zero(dims.b, dims.b);
  for (Index k = 0; k < dims.b; ++k)
    for (Index l = 0; l < dims.b; ++l)
      for (Index i = 0; i < dims.a; ++i) out(k, l) += m(i * dims.b + k, i * dims.b + l);
  return out;
}

inline Matrix partial_trace(const TraceClassOperator& rho, Side side) {
  return partial_trace(rho.matrix(), rho.dims(), side);
}

namespace detail {

inline void check_factor_dims(const Matrix& m, std::span<const Index> dims, const char* who) {
  for (Index d : dims)
    if (d < 1) throw DimensionError(std::string(who) + ": factor dimensions must be positive");
  const Index total = product_of(dims);
  if (m.rows() != m.cols() || m.rows() != total) {
    std::ostringstream os;
    os << who << ": matrix " << describe(m) << " but factor dims multiply to " << total;
    throw DimensionError(os.str());
  }
}

}  // namespace detail

/// Conjugates m by the factor permutation: output factor k is input factor
/// perm[k].
inline Matrix permute_subsystems(const Matrix& m, std::span<const Index> dims,
                                 std::span<const Index> perm) {
  detail::check_factor_dims(m, dims, "permute_subsystems");
  const std::size_t n = dims.size();
  if (perm.size() != n) throw DimensionError("permute_subsystems: permutation length mismatch");
  std::vector<bool> seen(n, false);
  for (Index p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= n || seen[p])
      throw DimensionError("permute_subsystems: not a permutation of the factor list");
    seen[p] = true;
  }
  std::vector<Index> out_dims(n);
  for (std::size_t k = 0; k < n; ++k) out_dims[k] = dims[perm[k]];

  const Index total = m.rows();
  std::vector<Index> source(total);
  std::vector<Index> x(n), y(n);
  for (Index flat = 0; flat < total; ++flat) {
    unflatten(flat, out_dims, x);
    for (std::size_t k = 0; k < n; ++k) y[perm[k]] = x[k];
    source[flat] = flatten(y, dims);
  }
  Matrix out(total, total);
  for (Index r = 0; r < total; ++r)
    for (Index c = 0; c < total; ++c) out(r, c) = m(source[r], source[c]);
  return out;
}

/// Traces out every factor whose `keep` flag is false; kept factors stay in
/// their original order.
inline Matrix partial_trace_factors(const Matrix& m, std::span<const Index> dims,
                                    const std::vector<bool>& keep) {
  detail::check_factor_dims(m, dims, "partial_trace_factors");
  if (keep.size() != dims.size())
    throw DimensionError("partial_trace_factors: keep mask length mismatch");
  std::vector<Index> kept_dims, traced_dims;
  for (std::size_t f = 0; f < dims.size(); ++f) (keep[f] ? kept_dims : traced_dims).push_back(dims[f]);
  const Index dk = product_of(kept_dims), dt = product_of(traced_dims);

  // full[kk * dt + tt] = composite index of (kept multi-index kk, traced multi-index tt)
  std::vector<Index> full(dk * dt);
  std::vector<Index> xk(kept_dims.size()), xt(traced_dims.size()), y(dims.size());
  for (Index kk = 0; kk < dk; ++kk) {
    unflatten(kk, kept_dims, xk);
    for (Index tt = 0; tt < dt; ++tt) {
      unflatten(tt, traced_dims, xt);
      std::size_t ik = 0, it = 0;
      for (std::size_t f = 0; f < dims.size(); ++f) y[f] = keep[f] ? xk[ik++] : xt[it++];
      full[kk * dt + tt] = flatten(y, dims);
    }
  }
  Matrix out = Matrix::Zero(dk, dk);
  for (Index r = 0; r < dk; ++r)
    for (Index c = 0; c < dk; ++c)
      for (Index tt = 0; tt < dt; ++tt) out(r, c) += m(full[r * dt + tt], full[c * dt + tt]);
  return out;
}

}  // namespace sepscope
