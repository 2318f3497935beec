#pragma once

// Realignment (Oxenrider-Hill reordering) and the computable cross norm.
//
// With rho_ijkl = <ik|rho|jl>, the realigned matrix has rho_ijkl at row
// i * d_A + j and column k * d_B + l. Worked 2x2 table (d_A = d_B = 2):
//
//   rho entry <ik|rho|jl>   rho (row, col)   realigned (row, col)
//   <00|rho|00>             (0, 0)           (0, 0)
//   <00|rho|11>             (0, 3)           (1, 1)
//   <11|rho|00>             (3, 0)           (2, 2)
//   <10|rho|10>             (2, 2)           (3, 0)
//   <01|rho|01>             (1, 1)           (0, 3)
//
// For a product A (x) B the realigned matrix is vec(A) vec(B)^T, i.e.
// |A><B*| in Hilbert-Schmidt notation.

#include "sepscope/linalg.hpp"

namespace sepscope {

/// Threshold above 1 for declaring a state entangled from tau.
inline constexpr double kDetectTol = 1e-9;

struct RealignedMatrix {
  Dims dims;
  Matrix mat;                   // d_A^2 x d_B^2
  RealVector singular_values;   // nonincreasing, min(d_A^2, d_B^2) entries

  double trace_norm() const { return singular_values.sum(); }
};

/// Pure entry reordering; no validation beyond shape.
inline Matrix realign_entries(const Matrix& rho, Dims dims) {
  if (rho.rows() != dims.total() || rho.cols() != dims.total())
    throw DimensionError("realign: matrix " + describe(rho) + " does not match dims");
  const Index da = dims.a, db = dims.b;
  Matrix out(da * da, db * db);
  for (Index i = 0; i < da; ++i)
    for (Index k = 0; k < db; ++k)
      for (Index j = 0; j < da; ++j)
        for (Index l = 0; l < db; ++l) out(i * da + j, k * db + l) = rho(i * db + k, j * db + l);
  return out;
}

inline RealignedMatrix realign(const Matrix& rho, Dims dims) {
  RealignedMatrix r{dims, realign_entries(rho, dims), {}};
  r.singular_values = singular_values(r.mat);
  return r;
}

inline RealignedMatrix realign(const TraceClassOperator& rho) {
  return realign(rho.matrix(), rho.dims());
}

/// tau(rho) = || realign(rho) ||_1
inline double ccn_value(const Matrix& rho, Dims dims) { return trace_norm(realign_entries(rho, dims)); }

inline double ccn_value(const TraceClassOperator& rho) { return ccn_value(rho.matrix(), rho.dims()); }

struct CcnResult {
  bool entangled = false;  // true certifies entanglement; false is inconclusive
  double margin = 0.0;     // tau - 1
  double tau = 0.0;
};

inline CcnResult ccn_entangled(const DensityMatrix& rho) {
  const double tau = ccn_value(rho);
  return {tau > 1.0 + kDetectTol, tau - 1.0, tau};
}

}  // namespace sepscope
