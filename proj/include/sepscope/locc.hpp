#pragma once

// Elementary trace-preserving local operations on factorized states:
//   AddAncilla      append an uncorrelated local ancilla factor (O1)
//   TraceOutFactor  discard one declared factor on one side (O2)
//   LocalUnitary    conjugate by U_A (x) U_B (O3)
//   LvnMeasurement  rho -> sum_k (P_k (x) 1) rho (P_k (x) 1) on one side (O4)
// States are kept in canonical (A factors)(B factors) order throughout.

#include <variant>

#include "sepscope/criteria.hpp"

namespace sepscope {

namespace op {

/// `ancilla` has dims (a, 1) for Alice, (1, b) for Bob. An (a, b) ancilla
/// must be a product sigma_A (x) sigma_B and adds one factor on each side.
struct AddAncilla {
  DensityMatrix ancilla;
};

struct TraceOutFactor {
  Side side = Side::first;
  Index factor = 0;
};

struct LocalUnitary {
  Matrix u_a;
  Matrix u_b;
};

struct LvnMeasurement {
  Side side = Side::first;
  std::vector<Matrix> projectors;
};

}  // namespace op

using LocalOperation = std::variant<op::AddAncilla, op::TraceOutFactor, op::LocalUnitary, op::LvnMeasurement>;

/// Hermitian, idempotent, pairwise orthogonal, summing to the identity.
inline void validate_projectors(const std::vector<Matrix>& ps, Index dim, double tol = 1e-12) {
  if (ps.empty()) throw InvariantError("LvnMeasurement: empty projector family");
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Matrix& p = ps[k];
    if (p.rows() != dim || p.cols() != dim)
      throw DimensionError("LvnMeasurement: projector " + std::to_string(k) + " is " + describe(p) +
                           ", side dimension is " + std::to_string(dim));
    if (hermiticity_defect(p) > tol)
      throw InvariantError("LvnMeasurement: projector " + std::to_string(k) + " is not Hermitian");
    if ((p * p - p).cwiseAbs().maxCoeff() > tol)
      throw InvariantError("LvnMeasurement: projector " + std::to_string(k) + " is not idempotent");
    for (std::size_t j = 0; j < k; ++j)
      if ((ps[j] * p).cwiseAbs().maxCoeff() > tol)
        throw InvariantError("LvnMeasurement: projectors " + std::to_string(j) + " and " + std::to_string(k) +
                             " are not orthogonal");
    sum += p;
  }
  if ((sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol)
    throw InvariantError("LvnMeasurement: projectors do not sum to the identity");
}

namespace detail {

inline FactorizedState apply_op(const op::AddAncilla& o, const FactorizedState& fs) {
  const DensityMatrix& anc = o.ancilla;
  const Matrix ra = partial_trace(anc, Side::second);
  const Matrix rb = partial_trace(anc, Side::first);
  if ((tensor(ra, rb) - anc.matrix()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvariantError("AddAncilla: ancilla must be uncorrelated (a product sigma_A (x) sigma_B)");

  // (A..)(B..)(a)(b) -> (A.. a)(B.. b)
  auto alice = fs.alice_factors();
  auto bob = fs.bob_factors();
  const Matrix joint = tensor(fs.state().matrix(), anc.matrix());
  const std::array<Index, 4> dims{fs.state().dim_a(), fs.state().dim_b(), anc.dim_a(), anc.dim_b()};
  const std::array<Index, 4> perm{0, 2, 1, 3};
  const Matrix regrouped = permute_subsystems(joint, dims, perm);
  if (anc.dim_a() > 1) alice.push_back(anc.dim_a());
  if (anc.dim_b() > 1) bob.push_back(anc.dim_b());
  return FactorizedState(DensityMatrix::from_hermitized(regrouped, {dims[0] * dims[2], dims[1] * dims[3]}),
                         alice, bob);
}

inline FactorizedState apply_op(const op::TraceOutFactor& o, const FactorizedState& fs) {
  const auto& factors = (o.side == Side::first) ? fs.alice_factors() : fs.bob_factors();
  if (factors.size() < 2)
    throw DimensionError(std::string("TraceOutFactor: ") + to_string(o.side) +
                         " side has a single factor; tracing it would remove the party");
  if (o.factor < 0 || static_cast<std::size_t>(o.factor) >= factors.size())
    throw DimensionError("TraceOutFactor: factor index " + std::to_string(o.factor) + " out of range");
  std::vector<bool> ta(fs.alice_factors().size(), false), tb(fs.bob_factors().size(), false);
  (o.side == Side::first ? ta : tb)[o.factor] = true;
  return fs.trace_out(ta, tb);
}

inline FactorizedState apply_op(const op::LocalUnitary& o, const FactorizedState& fs) {
  const Dims d = fs.state().dims();
  if (o.u_a.rows() != d.a || o.u_b.rows() != d.b)
    throw DimensionError("LocalUnitary: unitaries " + describe(o.u_a) + ", " + describe(o.u_b) +
                         " do not match sides " + std::to_string(d.a) + "x" + std::to_string(d.b));
  if (!is_unitary(o.u_a) || !is_unitary(o.u_b)) throw InvariantError("LocalUnitary: operator is not unitary");
  return FactorizedState(local_unitary_conjugate(fs.state(), o.u_a, o.u_b), fs.alice_factors(), fs.bob_factors());
}

inline FactorizedState apply_op(const op::LvnMeasurement& o, const FactorizedState& fs) {
  const Dims d = fs.state().dims();
  const Index side_dim = (o.side == Side::first) ? d.a : d.b;
  validate_projectors(o.projectors, side_dim);
  Matrix out = Matrix::Zero(d.total(), d.total());
  for (const Matrix& p : o.projectors) {
    const Matrix k = (o.side == Side::first) ? tensor(p, Matrix::Identity(d.b, d.b))
                                             : tensor(Matrix::Identity(d.a, d.a), p);
    out += k * fs.state().matrix() * k;
  }
  return FactorizedState(DensityMatrix::from_hermitized(out, d), fs.alice_factors(), fs.bob_factors());
}

}  // namespace detail

inline FactorizedState apply(const LocalOperation& operation, const FactorizedState& fs) {
  return std::visit([&](const auto& o) { return detail::apply_op(o, fs); }, operation);
}

enum class Direction { decreased, invariant, increased };

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::decreased: return "decreased";
    case Direction::invariant: return "invariant";
    default: return "increased";
  }
}

struct MonotonicityProbe {
  double tau_before = 0.0;
  double tau_after = 0.0;
  Direction direction = Direction::invariant;
};

inline MonotonicityProbe monotonicity_probe(const LocalOperation& operation, const FactorizedState& fs,
                                            double tol = 1e-10) {
  MonotonicityProbe p;
  p.tau_before = ccn_value(fs.state());
  p.tau_after = ccn_value(apply(operation, fs).state());
  const double delta = p.tau_after - p.tau_before;
  p.direction = delta > tol ? Direction::increased : (delta < -tol ? Direction::decreased : Direction::invariant);
  return p;
}

}  // namespace sepscope
