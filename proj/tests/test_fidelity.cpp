#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sepscope/fidelity.hpp"

using namespace sepscope;

TEST(Fidelity, LowerBoundIsBellOverlap) {
  Rng rng(51);
  for (Index d : {2, 3, 4}) {
    const DensityMatrix rho = random_density({d, d}, d * d, rng);
    const Matrix psi = max_entangled_vector(d);
    EXPECT_NEAR(fidelity_lower(rho), (psi.adjoint() * rho.matrix() * psi)(0, 0).real(), 1e-14);
    EXPECT_NEAR(rotated_bell_overlap(rho.matrix(), Matrix::Identity(d, d)).real(), fidelity_lower(rho), 1e-14);
  }
}

TEST(Fidelity, OptimizerBeatsGridOracle) {
  Rng rng(52);
  for (int k = 0; k < 5; ++k) {
    const DensityMatrix rho = random_density({2, 2}, 1 + k % 4, rng);
    const auto res = fidelity_optimize(rho);
    EXPECT_GE(res.value, oracle::fidelity_grid_2x2(rho.matrix(), 24) - 1e-12);
    EXPECT_LE(res.value, ccn_value(rho) / 2.0 + 1e-10);
  }
}

TEST(Fidelity, ReportedUnitaryAttainsValue) {
  Rng rng(53);
  const DensityMatrix rho = random_density({3, 3}, 4, rng);
  const auto res = fidelity_optimize(rho);
  EXPECT_TRUE(is_unitary(res.unitary));
  EXPECT_NEAR(rotated_bell_overlap(rho.matrix(), res.unitary).real(), res.value, 1e-14);
}

TEST(Fidelity, DeterministicForFixedSeed) {
  Rng rng(54);
  const DensityMatrix rho = random_density({3, 3}, 9, rng);
  const auto a = fidelity_optimize(rho), b = fidelity_optimize(rho);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.best_restart, b.best_restart);
}

TEST(Fidelity, RotatedMaximallyEntangledReachesOne) {
  Rng rng(55);
  for (Index d : {2, 3}) {
    const Matrix u = random_unitary(d, rng);
    const Matrix w = tensor(Matrix::Identity(d, d), u);
    const DensityMatrix rho = DensityMatrix::from_hermitized(w * max_entangled_projector(d) * w.adjoint(), {d, d});
    EXPECT_NEAR(fidelity_optimize(rho).value, 1.0, 1e-9);
  }
}

TEST(Fidelity, RejectsNonSquare) {
  const DensityMatrix rho(Matrix::Identity(6, 6) / 6.0, {2, 3});
  EXPECT_THROW(fidelity_lower(rho), UnsupportedDimensionError);
  EXPECT_THROW(fidelity_optimize(rho), UnsupportedDimensionError);
  FidelityOptions none;
  none.restarts = 0;
  EXPECT_THROW(fidelity_optimize(DensityMatrix(Matrix::Identity(4, 4) / 4.0, {2, 2}), none), ArgumentError);
}

TEST(Fidelity, OperatorExtensionIsBoundedByTraceNorm) {
  Rng rng(56);
  for (Index d : {2, 3}) {
    const TraceClassOperator op(ginibre(d * d, d * d, rng), {d, d});
    const auto res = fidelity_optimize(op, FidelityOptions{});
    const double at_identity = std::abs(rotated_bell_overlap(op.matrix(), Matrix::Identity(d, d)));
    EXPECT_GE(res.value, at_identity - 1e-14);
    EXPECT_LE(res.value, ccn_value(op) / static_cast<double>(d) + 1e-10);
  }
}

TEST(Fidelity, OperatorExtensionAgreesWithGridOnPhasedState) {
  // e^{i phi} rho has the same |.| landscape as rho
  Rng rng(57);
  const DensityMatrix rho = random_density({2, 2}, 2, rng);
  const TraceClassOperator op(std::polar(1.0, 0.7) * rho.matrix(), {2, 2});
  EXPECT_NEAR(fidelity_optimize(op, FidelityOptions{}).value, fidelity_optimize(rho).value, 1e-9);
}

TEST(ClosedForm, EqualsHalfTauForEntangledBellDiagonal) {
  Rng rng(58);
  for (int k = 0; k < 20; ++k) {
    const DensityMatrix rho = make_state(random_bell_diagonal(rng, true));
    const auto cf = fidelity_two_qubit_max_disordered(decompose(rho, HsBasis::spin), true);
    EXPECT_NEAR(2.0 * cf.value, ccn_value(rho), 1e-12);
    EXPECT_NEAR(rotated_bell_overlap(rho.matrix(), cf.unitary).real(), cf.value, 1e-12);
    EXPECT_NEAR(fidelity_optimize(rho).value, cf.value, 1e-9);
  }
}

TEST(ClosedForm, SignatureSelectsUnitary) {
  const auto pauli = pauli_matrices();
  const auto run = [](std::array<double, 3> t) {
    return fidelity_two_qubit_max_disordered(decompose(make_state(family::MaxDisordered{t}), HsBasis::pauli), true);
  };
  EXPECT_EQ(run({-0.5, -0.5, -0.5}).signature, (std::array<int, 3>{-1, -1, -1}));
  EXPECT_EQ(run({0.5, 0.5, -0.5}).unitary, pauli[0]);
  EXPECT_EQ(run({0.5, -0.5, 0.5}).unitary, Matrix(Matrix::Identity(2, 2)));
  EXPECT_EQ(run({-0.5, 0.5, 0.5}).unitary, pauli[2]);
}

TEST(ClosedForm, Refusals) {
  const DensityMatrix sep = make_state(family::MaxDisordered{{0.2, 0.1, 0.1}});
  EXPECT_THROW(fidelity_two_qubit_max_disordered(decompose(sep, HsBasis::pauli), false), ArgumentError);
  // two negative entries: not an entangled signature
  const DensityMatrix two = make_state(family::MaxDisordered{{-0.3, -0.3, 0.1}});
  EXPECT_THROW(fidelity_two_qubit_max_disordered(decompose(two, HsBasis::pauli), true), ArgumentError);
  // r != 0
  const DensityMatrix ce = make_state(family::Counterexample{{0.5, 0.25, 0.0625}});
  EXPECT_THROW(fidelity_two_qubit_max_disordered(decompose(ce, HsBasis::pauli), true), ArgumentError);
}
