#pragma once

// Brute-force reference implementations. They share no code paths with the
// library beyond Eigen itself: every map is built by expanding the input in
// matrix units and applying the defining rule term by term.

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat unit(long rows, long cols, long i, long j) {
  Mat e = Mat::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Row-major vec as a column.
inline Mat vec_col(const Mat& m) {
  Mat v(m.size(), 1);
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) v(i * m.cols() + j, 0) = m(i, j);
  return v;
}

/// Coefficient of E_ij (x) F_kl in rho, read off as tr((E_ij (x) F_kl)^dagger rho).
inline cplx unit_coefficient(const Mat& rho, long da, long db, long i, long j, long k, long l) {
  return (kron(unit(da, da, i, j), unit(db, db, k, l)).adjoint() * rho).trace();
}

/// realign(E (x) F) = vec(E) vec(F)^T, extended linearly.
inline Mat realign(const Mat& rho, long da, long db) {
  Mat out = Mat::Zero(da * da, db * db);
  for (long i = 0; i < da; ++i)
    for (long j = 0; j < da; ++j)
      for (long k = 0; k < db; ++k)
        for (long l = 0; l < db; ++l) {
          const cplx c = unit_coefficient(rho, da, db, i, j, k, l);
          if (c == cplx(0.0)) continue;
          out += c * vec_col(unit(da, da, i, j)) * vec_col(unit(db, db, k, l)).transpose();
        }
  return out;
}

/// (E (x) F)^{T_B} = E (x) F^T
inline Mat partial_transpose_b(const Mat& rho, long da, long db) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (long i = 0; i < da; ++i)
    for (long j = 0; j < da; ++j)
      for (long k = 0; k < db; ++k)
        for (long l = 0; l < db; ++l)
          out += unit_coefficient(rho, da, db, i, j, k, l) * kron(unit(da, da, i, j), unit(db, db, l, k));
  return out;
}

/// sum_k (1 (x) <k|) rho (1 (x) |k>)
inline Mat trace_b(const Mat& rho, long da, long db) {
  Mat out = Mat::Zero(da, da);
  for (long k = 0; k < db; ++k) {
    const Mat v = kron(Mat::Identity(da, da), unit(db, 1, k, 0));
    out += v.adjoint() * rho * v;
  }
  return out;
}

inline Mat trace_a(const Mat& rho, long da, long db) {
  Mat out = Mat::Zero(db, db);
  for (long k = 0; k < da; ++k) {
    const Mat v = kron(unit(da, 1, k, 0), Mat::Identity(db, db));
    out += v.adjoint() * rho * v;
  }
  return out;
}

/// Trace norm by one-sided Jacobi SVD (the library uses divide and conquer).
inline double trace_norm(const Mat& m) {
  return Eigen::JacobiSVD<Mat>(m).singularValues().sum();
}

inline double min_eig(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  return es.eigenvalues()(0);
}

/// Pauli matrices sigma_1, sigma_2, sigma_3.
inline std::array<Mat, 3> paulis() {
  Mat x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  return {x, y, z};
}

/// Grid search of <Psi+|(1 (x) U) rho (1 (x) U^dagger)|Psi+> over SU(2),
/// U = exp(-i a sigma_3/2) exp(-i b sigma_2/2) exp(-i c sigma_3/2).
inline double fidelity_grid_2x2(const Mat& rho, int steps) {
  const double pi = std::acos(-1.0);
  Mat psi = Mat::Zero(4, 1);
  psi(0, 0) = psi(3, 0) = 1.0 / std::sqrt(2.0);
  auto rz = [](double t) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = std::polar(1.0, -t / 2);
    m(1, 1) = std::polar(1.0, t / 2);
    return m;
  };
  auto ry = [](double t) {
    Mat m(2, 2);
    m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    return m;
  };
  double best = -1.0;
  for (int ia = 0; ia < steps; ++ia)
    for (int ib = 0; ib <= steps; ++ib)
      for (int ic = 0; ic < steps; ++ic) {
        const Mat u = rz(2 * pi * ia / steps) * ry(pi * ib / steps) * rz(2 * pi * ic / steps);
        const Mat w = kron(Mat::Identity(2, 2), u);
        const double v = (psi.adjoint() * w * rho * w.adjoint() * psi)(0, 0).real();
        best = std::max(best, v);
      }
  return best;
}

}  // namespace oracle
