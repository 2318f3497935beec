#include <gtest/gtest.h>

#include "sepscope/locc.hpp"

using namespace sepscope;

TEST(Locc, AncillaThenTraceOutRestoresState) {
  Rng rng(71);
  const DensityMatrix rho = random_density({2, 3}, 4, rng);
  const DensityMatrix sa = random_density({2, 1}, 2, rng), sb = random_density({2, 1}, 1, rng);
  const DensityMatrix anc(tensor(sa.matrix(), sb.matrix()), {2, 2});
  FactorizedState fs(rho);
  fs = apply(op::AddAncilla{anc}, fs);
  EXPECT_EQ(fs.alice_factors(), (std::vector<Index>{2, 2}));
  EXPECT_EQ(fs.bob_factors(), (std::vector<Index>{3, 2}));
  fs = apply(op::TraceOutFactor{Side::first, 1}, fs);
  fs = apply(op::TraceOutFactor{Side::second, 1}, fs);
  EXPECT_LT((fs.state().matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Locc, OneSidedAncilla) {
  Rng rng(72);
  const DensityMatrix rho = random_density({2, 2}, 4, rng);
  const DensityMatrix sa = random_density({3, 1}, 3, rng);
  const auto fs = apply(op::AddAncilla{sa}, FactorizedState(rho));
  EXPECT_EQ(fs.alice_factors(), (std::vector<Index>{2, 3}));
  EXPECT_EQ(fs.bob_factors(), (std::vector<Index>{2}));
  EXPECT_NEAR(ccn_value(fs.state()), ccn_value(rho) * frobenius_norm(sa.matrix()), 1e-12);
}

TEST(Locc, CorrelatedAncillaRejected) {
  const DensityMatrix bell(max_entangled_projector(2), {2, 2});
  EXPECT_THROW(apply(op::AddAncilla{bell}, FactorizedState(bell)), InvariantError);
}

TEST(Locc, TraceOutNeedsSecondFactor) {
  const DensityMatrix rho(Matrix::Identity(4, 4) / 4.0, {2, 2});
  EXPECT_THROW(apply(op::TraceOutFactor{Side::first, 0}, FactorizedState(rho)), DimensionError);
  const FactorizedState two(DensityMatrix(Matrix::Identity(8, 8) / 8.0, {4, 2}), {2, 2}, {2});
  EXPECT_THROW(apply(op::TraceOutFactor{Side::first, 2}, two), DimensionError);
}

TEST(Locc, LocalUnitaryKeepsTau) {
  Rng rng(73);
  const FactorizedState fs(random_density({3, 2}, 6, rng));
  const auto probe = monotonicity_probe(op::LocalUnitary{random_unitary(3, rng), random_unitary(2, rng)}, fs);
  EXPECT_EQ(probe.direction, Direction::invariant);
  EXPECT_THROW(apply(op::LocalUnitary{Matrix::Identity(3, 3) * 2.0, Matrix::Identity(2, 2)}, fs), InvariantError);
  EXPECT_THROW(apply(op::LocalUnitary{Matrix::Identity(2, 2), Matrix::Identity(2, 2)}, fs), DimensionError);
}

TEST(Locc, MeasurementNeverIncreasesTau) {
  Rng rng(74);
  for (int k = 0; k < 30; ++k) {
    const FactorizedState fs(random_density({3, 3}, 1 + k % 9, rng));
    const Side side = k % 2 ? Side::first : Side::second;
    const auto probe =
        monotonicity_probe(op::LvnMeasurement{side, random_projector_family(3, 1 + k % 3, rng)}, fs);
    EXPECT_NE(probe.direction, Direction::increased);
  }
}

TEST(Locc, ComputationalMeasurementOfBellState) {
  const FactorizedState fs(DensityMatrix(max_entangled_projector(2), {2, 2}));
  std::vector<Matrix> z{Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  z[0](0, 0) = 1.0;
  z[1](1, 1) = 1.0;
  const auto probe = monotonicity_probe(op::LvnMeasurement{Side::first, z}, fs);
  EXPECT_NEAR(probe.tau_before, 2.0, 1e-12);
  EXPECT_NEAR(probe.tau_after, 1.0, 1e-12);
  EXPECT_EQ(probe.direction, Direction::decreased);
}

TEST(Locc, ProjectorValidation) {
  Matrix p = Matrix::Zero(2, 2);
  p(0, 0) = 1.0;
  EXPECT_THROW(validate_projectors({p}, 2), InvariantError);            // incomplete
  EXPECT_THROW(validate_projectors({p, p}, 2), InvariantError);         // overlapping
  EXPECT_THROW(validate_projectors({0.5 * Matrix::Identity(2, 2), 0.5 * Matrix::Identity(2, 2)}, 2), InvariantError);
  EXPECT_THROW(validate_projectors({Matrix::Identity(3, 3)}, 2), DimensionError);
  EXPECT_THROW(validate_projectors({}, 2), InvariantError);
  EXPECT_NO_THROW(validate_projectors({Matrix::Identity(2, 2)}, 2));
}

TEST(Locc, TraceOutCanIncreaseTau) {
  const DensityMatrix noise(Matrix::Identity(4, 4) / 4.0, {2, 2});
  const auto fs = regroup_product(noise, make_state(family::Werner{2, 2.0 / 3.0}));
  FactorizedState reduced = apply(op::TraceOutFactor{Side::first, 0}, fs);
  const auto probe = monotonicity_probe(op::TraceOutFactor{Side::second, 0}, reduced);
  EXPECT_EQ(probe.direction, Direction::increased);
  EXPECT_NEAR(probe.tau_after, 1.5, 1e-12);
}
