#include <gtest/gtest.h>

#include "sepscope/locc.hpp"

using namespace sepscope;

TEST(Ppt, QubitWerner) {
  EXPECT_FALSE(ppt_criterion(make_state(family::Werner{2, 1.0 / 3.0 - 1e-6})).entangled);
  EXPECT_TRUE(ppt_criterion(make_state(family::Werner{2, 1.0 / 3.0 + 1e-6})).entangled);
}

TEST(Ccn, MaxDisorderedClosedForm) {
  Rng rng(61);
  for (Index d : {2, 3}) {
    const DensityMatrix rho = random_max_disordered(d, rng);
    ASSERT_TRUE(is_max_disordered(rho));
    EXPECT_NEAR(ccn_max_disordered(decompose(rho, HsBasis::spin)), ccn_value(rho), 1e-10);
  }
  const DensityMatrix ce = make_state(family::Counterexample{{0.5, 0.25, 0.0625}});
  EXPECT_FALSE(is_max_disordered(ce));
  EXPECT_THROW(ccn_max_disordered(decompose(ce, HsBasis::spin)), ArgumentError);
}

TEST(Ccn, BisectionFindsWernerThreshold) {
  const double x = bisect_ccn_crossing([](double p) { return make_state(family::Werner{2, p}); }, 0.0, 1.0);
  EXPECT_NEAR(x, 1.0 / 3.0, 1e-10);
  EXPECT_THROW(bisect_ccn_crossing([](double p) { return make_state(family::Werner{2, p}); }, 0.5, 1.0),
               ArgumentError);
}

TEST(Ccn, MultiplicativeUnderRegrouping) {
  Rng rng(62);
  for (int k = 0; k < 10; ++k) {
    const DensityMatrix a = random_density({2, 3}, 3, rng), b = random_density({2, 2}, 2, rng);
    const auto fs = regroup_product(a, b);
    EXPECT_EQ(fs.alice_factors(), (std::vector<Index>{2, 2}));
    EXPECT_EQ(fs.bob_factors(), (std::vector<Index>{3, 2}));
    EXPECT_NEAR(ccn_value(fs.state()), ccn_value(a) * ccn_value(b), 1e-12);
  }
}

TEST(ExtendedCcn, RevealsHiddenEntanglement) {
  const DensityMatrix noise(Matrix::Identity(4, 4) / 4.0, {2, 2});  // tau = 1/2
  const DensityMatrix werner = make_state(family::Werner{2, 2.0 / 3.0});  // tau = 3/2
  const auto fs = regroup_product(noise, werner);
  EXPECT_NEAR(ccn_value(fs.state()), 0.75, 1e-12);
  const auto ext = extended_ccn(fs);
  EXPECT_NEAR(ext.value, 1.5, 1e-12);
  EXPECT_EQ(ext.alice_traced, (std::vector<Index>{0}));
  EXPECT_EQ(ext.bob_traced, (std::vector<Index>{0}));
  EXPECT_EQ(ext.evaluated, 15u);
}

TEST(FactorizedState, RejectsInconsistentFactors) {
  const DensityMatrix rho(Matrix::Identity(8, 8) / 8.0, {4, 2});
  EXPECT_NO_THROW(FactorizedState(rho, {2, 2}, {2}));
  EXPECT_THROW(FactorizedState(rho, {2, 3}, {2}), DimensionError);
  EXPECT_THROW(FactorizedState(rho, {}, {2}), DimensionError);
}

TEST(Report, CounterexampleFlags) {
  const auto rep = full_report(make_state(family::Counterexample{{0.5, 0.25, 0.0625}}));
  EXPECT_FALSE(rep.ccn_flag);
  EXPECT_TRUE(rep.ppt_flag);
  EXPECT_FALSE(rep.distillable_flag);
  EXPECT_NEAR(rep.tau, 0.9463834764831844, 1e-12);
  ASSERT_TRUE(rep.fidelity_lower && rep.fidelity_best && rep.fidelity_upper);
  EXPECT_LE(*rep.fidelity_lower, *rep.fidelity_best + 1e-12);
  EXPECT_LE(*rep.fidelity_best, *rep.fidelity_upper + 1e-10);
}

TEST(Report, MaximallyEntangled) {
  const auto rep = full_report(make_state(family::PureSchmidt{{0.5, 0.5}}));
  EXPECT_NEAR(rep.tau, 2.0, 1e-12);
  EXPECT_NEAR(*rep.fidelity_best, 1.0, 1e-10);
  EXPECT_TRUE(rep.ccn_flag && rep.ppt_flag && rep.distillable_flag);
  ASSERT_TRUE(rep.closed_form_tau);
  EXPECT_NEAR(*rep.closed_form_tau, 2.0, 1e-12);
}

TEST(Report, MaximallyMixedHasNoFlags) {
  const auto rep = full_report(make_state(family::Werner{2, 0.0}));
  EXPECT_FALSE(rep.ccn_flag || rep.ppt_flag || rep.distillable_flag);
}

TEST(Report, NonSquareOmitsFidelity) {
  Rng rng(63);
  const auto rep = full_report(random_density({2, 3}, 6, rng));
  EXPECT_FALSE(rep.fidelity_best);
  EXPECT_FALSE(rep.trace_realigned);
  EXPECT_FALSE(rep.distillable_flag);
}

TEST(Report, DistillableWhenTraceExceedsOne) {
  CriterionReport rep;
  rep.dims = {2, 2};
  rep.trace_realigned = 1.2;
  EXPECT_TRUE(distillable_by_fidelity(rep));
  rep.trace_realigned = 0.9;
  EXPECT_FALSE(distillable_by_fidelity(rep));
  rep.fidelity_best = 0.55;
  EXPECT_TRUE(distillable_by_fidelity(rep));
}
