#pragma once

// Fidelity with maximally entangled states,
//   f(rho) = max_U <Psi+| (1 (x) U) rho (1 (x) U^dagger) |Psi+>,
// and its computable bounds tr A(rho)/d <= f <= ||A(rho)||_1 / d.
//
// Writing W = conj(U) and w = vec(W), the objective is the quadratic form
// w^dagger rho w / d on the unitary group. The optimizer below is a
// Riemannian gradient ascent: W <- exp(alpha X) W with X = M^dagger - M,
// M = W G^dagger and G = unvec(rho w)/d, with a coarse Armijo line search
// on alpha. The first restart starts at U = 1, so the result never falls
// below tr A(rho)/d; later restarts start at Haar-random unitaries.

#include <array>
#include <cstdint>

#include "sepscope/hs_basis.hpp"
#include "sepscope/random.hpp"
#include "sepscope/realign.hpp"
#include "sepscope/states.hpp"

namespace sepscope {

struct FidelityOptions {
  int restarts = 16;
  double tol = 1e-10;  // step tolerance on ||X|| and on alpha ||X||
  int max_iterations = 2000;
  std::uint64_t seed = 0x5eed;
};

struct FidelityResult {
  double value = 0.0;  // attained at `unitary`; a lower bound on f
  Matrix unitary;
  bool converged = false;  // the winning restart met the step tolerance
  int iterations = 0;
  int best_restart = 0;
};

/// <Psi+| (1 (x) U) op (1 (x) U^dagger) |Psi+>
inline cplx rotated_bell_overlap(const Matrix& op, const Matrix& u) {
  const Index d = u.rows();
  if (op.rows() != d * d || op.cols() != d * d)
    throw DimensionError("rotated_bell_overlap: operator " + describe(op) + " vs unitary " + describe(u));
  const Vector w = vec(u.conjugate());
  return w.dot(op * w) / static_cast<double>(d);
}

namespace detail {

inline void require_square(const TraceClassOperator& rho, const char* who) {
  if (!rho.dims().square())
    throw UnsupportedDimensionError(std::string(who) + ": requires d_A == d_B (got " +
                                    std::to_string(rho.dim_a()) + "x" + std::to_string(rho.dim_b()) + ")");
}

inline Matrix unvec(const Vector& v, Index d) {
  Matrix m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = v(i * d + j);
  return m;
}

/// exp(alpha X) for skew-Hermitian X given the eigendecomposition of iX.
struct SkewExp {
  Matrix vecs;
  RealVector vals;

  explicit SkewExp(const Matrix& x) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(cplx(0.0, 1.0) * x));
    vecs = es.eigenvectors();
    vals = es.eigenvalues();
  }
  Matrix operator()(double alpha) const {
    Vector phases(vals.size());
    for (Index k = 0; k < vals.size(); ++k) phases(k) = std::polar(1.0, -alpha * vals(k));
    return vecs * phases.asDiagonal() * vecs.adjoint();
  }
};

struct Ascent {
  double value = 0.0;
  Matrix w;
  bool converged = false;
  int iterations = 0;
};

/// Maximizes w^dagger h w / d over unitary W (h Hermitian).
inline Ascent ascend(const Matrix& h, Index d, Matrix w, const FidelityOptions& opt) {
  const double dd = static_cast<double>(d);
  auto objective = [&](const Matrix& wm) {
    const Vector v = vec(wm);
    return v.dot(h * v).real() / dd;
  };
  Ascent out{objective(w), w, false, 0};
  double alpha = 1.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    out.iterations = it + 1;
    const Matrix g = unvec(h * vec(out.w), d) / dd;
    const Matrix m = out.w * g.adjoint();
    const Matrix x = m.adjoint() - m;
    const double slope = x.squaredNorm();
    if (std::sqrt(slope) < opt.tol) {
      out.converged = true;
      break;
    }
    // best Armijo-admissible step among alpha * 2^k, k = -2..2; halve only if none qualifies
    const SkewExp step(x);
    double best_alpha = 0.0, best_value = out.value;
    Matrix best_w;
    auto consider = [&](double a) {
      Matrix trial = step(a) * out.w;
      const double v = objective(trial);
      if (v >= out.value + 1e-4 * a * slope && v > best_value) {
        best_alpha = a;
        best_value = v;
        best_w = std::move(trial);
      }
    };
    for (double scale : {0.25, 0.5, 1.0, 2.0, 4.0}) consider(std::min(alpha * scale, 1e3));
    for (double a = alpha * 0.125; best_alpha == 0.0 && a * std::sqrt(slope) > 1e-16; a *= 0.5) consider(a);
    if (best_alpha > 0.0) {
      alpha = best_alpha;
      out.w = std::move(best_w);
      out.value = best_value;
    }
    if (best_alpha == 0.0 || alpha * std::sqrt(slope) < opt.tol) {
      // no representable improvement left along the gradient
      out.converged = true;
      break;
    }
  }
  out.value = objective(out.w);
  return out;
}

template <class Run>
FidelityResult best_of_restarts(Index d, const FidelityOptions& opt, Run run) {
  if (opt.restarts < 1) throw ArgumentError("fidelity_optimize: restarts must be >= 1");
  Rng rng(opt.seed);
  FidelityResult best;
  best.value = -INFINITY;
  for (int k = 0; k < opt.restarts; ++k) {
    const Matrix start = (k == 0) ? Matrix(Matrix::Identity(d, d)) : random_unitary(d, rng);
    FidelityResult r = run(start);
    r.best_restart = k;
    if (r.value > best.value) best = std::move(r);  // ties keep the lowest restart index
  }
  return best;
}

}  // namespace detail

/// tr A(rho) / d, cross-checked against <Psi+|rho|Psi+>.
inline double fidelity_lower(const DensityMatrix& rho) {
  detail::require_square(rho, "fidelity_lower");
  const Index d = rho.dim_a();
  const double via_trace = realign_entries(rho.matrix(), rho.dims()).trace().real() / static_cast<double>(d);
  const Vector psi = max_entangled_vector(d);
  const double via_overlap = psi.dot(rho.matrix() * psi).real();
  if (std::abs(via_trace - via_overlap) > 1e-12)
    throw NumericError("fidelity_lower: tr A(rho)/d and <Psi+|rho|Psi+> disagree");
  return via_trace;
}

/// Best found value of <Psi+|(1 (x) U) rho (1 (x) U^dagger)|Psi+> over
/// `restarts` local ascents. Never claims more than it attains.
inline FidelityResult fidelity_optimize(const DensityMatrix& rho, const FidelityOptions& opt = {}) {
  detail::require_square(rho, "fidelity_optimize");
  const Index d = rho.dim_a();
  const Matrix h = hermitize(rho.matrix());
  return detail::best_of_restarts(d, opt, [&](const Matrix& u0) {
    const auto a = detail::ascend(h, d, u0.conjugate(), opt);
    FidelityResult r;
    r.unitary = a.w.conjugate();
    r.value = rotated_bell_overlap(rho.matrix(), r.unitary).real();
    r.converged = a.converged;
    r.iterations = a.iterations;
    return r;
  });
}

/// Extension to arbitrary operators: max_U |<Psi+|(1 (x) U) op (1 (x) U^dagger)|Psi+>|.
/// Alternates a phase alignment theta = arg z with an ascent on the
/// Hermitian part of e^{-i theta} op; |z| never decreases between rounds.
inline FidelityResult fidelity_optimize(const TraceClassOperator& op, const FidelityOptions& opt) {
  detail::require_square(op, "fidelity_optimize");
  const Index d = op.dim_a();
  const Matrix& m = op.matrix();
  return detail::best_of_restarts(d, opt, [&](const Matrix& u0) {
    Matrix u = u0;
    double best = std::abs(rotated_bell_overlap(m, u));
    FidelityResult r{best, u, false, 0, 0};
    for (int round = 0; round < 50; ++round) {
      const cplx z = rotated_bell_overlap(m, u);
      const cplx phase = (std::abs(z) > 0.0) ? std::conj(z) / std::abs(z) : cplx(1.0);
      const Matrix h = hermitize(phase * m);
      const auto a = detail::ascend(h, d, u.conjugate(), opt);
      r.iterations += a.iterations;
      u = a.w.conjugate();
      const double val = std::abs(rotated_bell_overlap(m, u));
      const bool stalled = val - best <= opt.tol * std::max(1.0, best);
      if (val > best) {
        best = val;
        r.unitary = u;
      }
      r.converged = a.converged;
      if (stalled) break;
    }
    r.value = std::abs(rotated_bell_overlap(m, r.unitary));
    return r;
  });
}

// ---------------------------------------------------------------------------
// Two-qubit states with maximally disordered subsystems and diagonal T

struct ClosedFormFidelity {
  double value = 0.0;
  Matrix unitary;                 // signature-matched, global phase fixed to 1
  std::array<int, 3> signature{}; // sign of t_1, t_2, t_3 (+1 for t >= 0)
};

/// f = 1/4 + sum_n t_n/8 tr(sigma_n^T U sigma_n U^dagger) evaluated at the
/// unitary matched to the sign pattern of diag(T):
///   (-,-,-) -> [[0, i], [-i, 0]],  (+,+,-) -> sigma_1,
///   (+,-,+) -> 1,                  (-,+,+) -> sigma_3.
/// Only valid for entangled states, where it equals tau / 2.
inline ClosedFormFidelity fidelity_two_qubit_max_disordered(const HSDecomposition& input, bool entangled_hint) {
  if (!entangled_hint)
    throw ArgumentError(
        "fidelity_two_qubit_max_disordered: closed form only holds for entangled states; "
        "for separable states it can exceed the attainable fidelity");
  check_shape(input);
  if (input.dim != 2) throw UnsupportedDimensionError("fidelity_two_qubit_max_disordered: requires d = 2");
  const HSDecomposition dec = spin_to_pauli(input);
  if (dec.r.cwiseAbs().maxCoeff() > 1e-10 || dec.s.cwiseAbs().maxCoeff() > 1e-10)
    throw ArgumentError("fidelity_two_qubit_max_disordered: subsystems are not maximally disordered (r, s != 0)");
  for (Index m = 0; m < 3; ++m)
    for (Index n = 0; n < 3; ++n) {
      if (m != n && std::abs(dec.t(m, n)) > 1e-10)
        throw ArgumentError("fidelity_two_qubit_max_disordered: T is not diagonal");
      if (std::abs(dec.t(m, n).imag()) > 1e-10)
        throw ArgumentError("fidelity_two_qubit_max_disordered: T is not real");
    }

  ClosedFormFidelity out;
  int negatives = 0;
  for (int k = 0; k < 3; ++k) {
    out.signature[k] = dec.t(k, k).real() < 0.0 ? -1 : 1;
    negatives += out.signature[k] < 0;
  }
  const auto sig = out.signature;
  const auto sigma = pauli_matrices();
  const cplx i(0.0, 1.0);
  Matrix u(2, 2);
  if (sig == std::array<int, 3>{-1, -1, -1})
    u << 0, i, -i, 0;
  else if (sig == std::array<int, 3>{1, 1, -1})
    u = sigma[0];
  else if (sig == std::array<int, 3>{1, -1, 1})
    u = Matrix::Identity(2, 2);
  else if (sig == std::array<int, 3>{-1, 1, 1})
    u = sigma[2];
  else
    throw ArgumentError("fidelity_two_qubit_max_disordered: T has " + std::to_string(negatives) +
                        " negative eigenvalues; entangled states have exactly one or three");

  double f = 0.25;
  for (int n = 0; n < 3; ++n)
    f += dec.t(n, n).real() / 8.0 * (sigma[n].transpose() * u * sigma[n] * u.adjoint()).trace().real();
  out.value = f;
  out.unitary = u;
  return out;
}

}  // namespace sepscope
